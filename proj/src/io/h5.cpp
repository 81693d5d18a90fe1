#include "h5.hpp"

#include <filesystem>
#include <type_traits>

#include "meshfield/core/error.hpp"

namespace meshfield::h5 {
namespace {

std::string join(const std::string& where, const std::string& name) {
  if (where.empty() || where == "/") return "/" + name;
  return where + "/" + name;
}

template <typename T>
hid_t native_type() {
  if constexpr (std::is_same_v<T, double>) return H5T_NATIVE_DOUBLE;
  else if constexpr (std::is_same_v<T, std::uint32_t>) return H5T_NATIVE_UINT32;
  else if constexpr (std::is_same_v<T, std::int32_t>) return H5T_NATIVE_INT32;
  else if constexpr (std::is_same_v<T, std::int64_t>) return H5T_NATIVE_INT64;
  else if constexpr (std::is_same_v<T, std::uint8_t>) return H5T_NATIVE_UINT8;
  else static_assert(sizeof(T) == 0, "unsupported HDF5 type");
}

Handle variable_string_type() {
  Handle t(H5Tcopy(H5T_C_S1), H5Tclose);
  H5Tset_size(t.get(), H5T_VARIABLE);
  H5Tset_cset(t.get(), H5T_CSET_UTF8);
  return t;
}

void check(herr_t status, const std::string& what) {
  if (status < 0) throw Error("HDF5 error: " + what);
}

template <typename T>
void write_impl(hid_t loc, const std::string& name, const Dims& dims, const T* data) {
  Handle space(H5Screate_simple(static_cast<int>(dims.extents.size()), dims.extents.data(), nullptr),
               H5Sclose);
  Handle set(H5Dcreate2(loc, name.c_str(), native_type<T>(), space.get(), H5P_DEFAULT,
                        H5P_DEFAULT, H5P_DEFAULT),
             H5Dclose);
  if (!set) throw Error("HDF5 error: cannot create dataset " + name);
  if (dims.total() > 0) {
    check(H5Dwrite(set.get(), native_type<T>(), H5S_ALL, H5S_ALL, H5P_DEFAULT, data),
          "writing dataset " + name);
  }
}

template <typename T>
void write_scalar_attribute(hid_t loc, const std::string& name, T value) {
  Handle space(H5Screate(H5S_SCALAR), H5Sclose);
  Handle attr(H5Acreate2(loc, name.c_str(), native_type<T>(), space.get(), H5P_DEFAULT, H5P_DEFAULT),
              H5Aclose);
  if (!attr) throw Error("HDF5 error: cannot create attribute " + name);
  check(H5Awrite(attr.get(), native_type<T>(), &value), "writing attribute " + name);
}

Handle open_attribute(hid_t loc, const std::string& name, const std::string& where) {
  if (H5Aexists(loc, name.c_str()) <= 0) {
    throw MalformedFileError(where + "@" + name, "missing attribute");
  }
  Handle attr(H5Aopen(loc, name.c_str(), H5P_DEFAULT), H5Aclose);
  if (!attr) throw MalformedFileError(where + "@" + name, "cannot open attribute");
  Handle space(H5Aget_space(attr.get()), H5Sclose);
  if (H5Sget_simple_extent_npoints(space.get()) != 1) {
    throw MalformedFileError(where + "@" + name, "expected a scalar attribute");
  }
  return attr;
}

template <typename T>
T read_scalar_attribute(hid_t loc, const std::string& name, const std::string& where) {
  Handle attr = open_attribute(loc, name, where);
  Handle type(H5Aget_type(attr.get()), H5Tclose);
  const auto cls = H5Tget_class(type.get());
  if (cls != H5T_INTEGER && cls != H5T_FLOAT) {
    throw MalformedFileError(where + "@" + name, "expected a numeric attribute");
  }
  T value{};
  if (H5Aread(attr.get(), native_type<T>(), &value) < 0) {
    throw MalformedFileError(where + "@" + name, "cannot read attribute");
  }
  return value;
}

herr_t collect_name(hid_t, const char* name, const H5L_info_t*, void* out) {
  static_cast<std::vector<std::string>*>(out)->emplace_back(name);
  return 0;
}

}  // namespace

void silence_errors() { H5Eset_auto2(H5E_DEFAULT, nullptr, nullptr); }

Handle create_file(const std::string& path) {
  silence_errors();
  Handle fcpl(H5Pcreate(H5P_FILE_CREATE), H5Pclose);
  H5Pset_link_creation_order(fcpl.get(), H5P_CRT_ORDER_TRACKED | H5P_CRT_ORDER_INDEXED);
  Handle file(H5Fcreate(path.c_str(), H5F_ACC_TRUNC, fcpl.get(), H5P_DEFAULT), H5Fclose);
  if (!file) throw Error("cannot create file: " + path);
  return file;
}

Handle open_file(const std::string& path) {
  silence_errors();
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw FileNotFoundError(path);
  if (H5Fis_hdf5(path.c_str()) <= 0) throw MalformedFileError(path, "not an HDF5 file");
  Handle file(H5Fopen(path.c_str(), H5F_ACC_RDONLY, H5P_DEFAULT), H5Fclose);
  if (!file) throw MalformedFileError(path, "cannot open HDF5 file");
  return file;
}

bool exists(hid_t loc, const std::string& path) {
  std::string partial = path.starts_with('/') ? "/" : "";
  std::size_t pos = 0;
  while (pos < path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string::npos) next = path.size();
    if (next > pos) {
      if (!partial.empty() && partial.back() != '/') partial += '/';
      partial += path.substr(pos, next - pos);
      if (H5Lexists(loc, partial.c_str(), H5P_DEFAULT) <= 0) return false;
      if (H5Oexists_by_name(loc, partial.c_str(), H5P_DEFAULT) <= 0) return false;
    }
    pos = next + 1;
  }
  return true;
}

Handle create_group(hid_t loc, const std::string& name) {
  Handle gcpl(H5Pcreate(H5P_GROUP_CREATE), H5Pclose);
  H5Pset_link_creation_order(gcpl.get(), H5P_CRT_ORDER_TRACKED | H5P_CRT_ORDER_INDEXED);
  Handle group(H5Gcreate2(loc, name.c_str(), H5P_DEFAULT, gcpl.get(), H5P_DEFAULT), H5Gclose);
  if (!group) throw Error("HDF5 error: cannot create group " + name);
  return group;
}

Handle open_group(hid_t loc, const std::string& path) {
  if (!exists(loc, path)) throw MalformedFileError(path, "missing group");
  Handle group(H5Gopen2(loc, path.c_str(), H5P_DEFAULT), H5Gclose);
  if (!group) throw MalformedFileError(path, "not a group");
  return group;
}

std::vector<std::string> child_names(hid_t group) {
  std::vector<std::string> names;
  hsize_t idx = 0;
  if (H5Literate(group, H5_INDEX_CRT_ORDER, H5_ITER_INC, &idx, collect_name, &names) < 0) {
    names.clear();
    idx = 0;
    H5Literate(group, H5_INDEX_NAME, H5_ITER_INC, &idx, collect_name, &names);
  }
  return names;
}

void write_dataset(hid_t loc, const std::string& name, const Dims& dims, const double* data) {
  write_impl(loc, name, dims, data);
}
void write_dataset(hid_t loc, const std::string& name, const Dims& dims, const std::uint32_t* data) {
  write_impl(loc, name, dims, data);
}
void write_dataset(hid_t loc, const std::string& name, const Dims& dims, const std::int32_t* data) {
  write_impl(loc, name, dims, data);
}

void write_string_dataset(hid_t loc, const std::string& name, const std::vector<std::string>& values) {
  std::vector<const char*> ptrs;
  for (const auto& v : values) ptrs.push_back(v.c_str());
  hsize_t n = values.size();
  Handle space(H5Screate_simple(1, &n, nullptr), H5Sclose);
  Handle type = variable_string_type();
  Handle set(H5Dcreate2(loc, name.c_str(), type.get(), space.get(), H5P_DEFAULT, H5P_DEFAULT,
                        H5P_DEFAULT),
             H5Dclose);
  if (!set) throw Error("HDF5 error: cannot create dataset " + name);
  if (n > 0) check(H5Dwrite(set.get(), type.get(), H5S_ALL, H5S_ALL, H5P_DEFAULT, ptrs.data()),
                   "writing dataset " + name);
}

template <typename T>
std::vector<T> read_dataset(hid_t loc, const std::string& name, Dims& dims, const std::string& where) {
  const std::string path = join(where, name);
  if (!exists(loc, name)) throw MalformedFileError(path, "missing dataset");
  Handle set(H5Dopen2(loc, name.c_str(), H5P_DEFAULT), H5Dclose);
  if (!set) throw MalformedFileError(path, "not a dataset");
  Handle type(H5Dget_type(set.get()), H5Tclose);
  const auto cls = H5Tget_class(type.get());
  if (cls != H5T_INTEGER && cls != H5T_FLOAT) throw MalformedFileError(path, "not numeric");
  Handle space(H5Dget_space(set.get()), H5Sclose);
  const int rank = H5Sget_simple_extent_ndims(space.get());
  if (rank < 0) throw MalformedFileError(path, "invalid dataspace");
  dims.extents.assign(static_cast<std::size_t>(rank), 0);
  if (rank > 0) H5Sget_simple_extent_dims(space.get(), dims.extents.data(), nullptr);
  std::vector<T> out(dims.total());
  if (!out.empty() &&
      H5Dread(set.get(), native_type<T>(), H5S_ALL, H5S_ALL, H5P_DEFAULT, out.data()) < 0) {
    throw MalformedFileError(path, "cannot read dataset");
  }
  return out;
}

template std::vector<double> read_dataset<double>(hid_t, const std::string&, Dims&, const std::string&);
template std::vector<std::uint32_t> read_dataset<std::uint32_t>(hid_t, const std::string&, Dims&,
                                                                const std::string&);
template std::vector<std::int32_t> read_dataset<std::int32_t>(hid_t, const std::string&, Dims&,
                                                              const std::string&);
template std::vector<std::int64_t> read_dataset<std::int64_t>(hid_t, const std::string&, Dims&,
                                                              const std::string&);

std::vector<std::string> read_string_dataset(hid_t loc, const std::string& name,
                                             const std::string& where) {
  const std::string path = join(where, name);
  if (!exists(loc, name)) throw MalformedFileError(path, "missing dataset");
  Handle set(H5Dopen2(loc, name.c_str(), H5P_DEFAULT), H5Dclose);
  if (!set) throw MalformedFileError(path, "not a dataset");
  Handle file_type(H5Dget_type(set.get()), H5Tclose);
  if (H5Tget_class(file_type.get()) != H5T_STRING || H5Tis_variable_str(file_type.get()) <= 0) {
    throw MalformedFileError(path, "expected variable-length strings");
  }
  Handle space(H5Dget_space(set.get()), H5Sclose);
  const auto n = H5Sget_simple_extent_npoints(space.get());
  if (n < 0) throw MalformedFileError(path, "invalid dataspace");
  std::vector<char*> raw(static_cast<std::size_t>(n), nullptr);
  Handle mem_type = variable_string_type();
  if (n > 0 && H5Dread(set.get(), mem_type.get(), H5S_ALL, H5S_ALL, H5P_DEFAULT, raw.data()) < 0) {
    throw MalformedFileError(path, "cannot read strings");
  }
  std::vector<std::string> out;
  for (char* s : raw) {
    out.emplace_back(s != nullptr ? s : "");
  }
  if (n > 0) H5Dvlen_reclaim(mem_type.get(), space.get(), H5P_DEFAULT, raw.data());
  return out;
}

void write_attribute(hid_t loc, const std::string& name, std::uint32_t value) {
  write_scalar_attribute(loc, name, value);
}
void write_attribute(hid_t loc, const std::string& name, std::uint8_t value) {
  write_scalar_attribute(loc, name, value);
}
void write_attribute(hid_t loc, const std::string& name, double value) {
  write_scalar_attribute(loc, name, value);
}

void write_attribute(hid_t loc, const std::string& name, const std::string& value) {
  Handle type(H5Tcopy(H5T_C_S1), H5Tclose);
  H5Tset_size(type.get(), value.size() + 1);
  H5Tset_strpad(type.get(), H5T_STR_NULLTERM);
  Handle space(H5Screate(H5S_SCALAR), H5Sclose);
  Handle attr(H5Acreate2(loc, name.c_str(), type.get(), space.get(), H5P_DEFAULT, H5P_DEFAULT),
              H5Aclose);
  if (!attr) throw Error("HDF5 error: cannot create attribute " + name);
  check(H5Awrite(attr.get(), type.get(), value.c_str()), "writing attribute " + name);
}

bool has_attribute(hid_t loc, const std::string& name) { return H5Aexists(loc, name.c_str()) > 0; }

std::uint32_t read_u32_attribute(hid_t loc, const std::string& name, const std::string& where) {
  return read_scalar_attribute<std::uint32_t>(loc, name, where);
}
std::uint8_t read_u8_attribute(hid_t loc, const std::string& name, const std::string& where) {
  return read_scalar_attribute<std::uint8_t>(loc, name, where);
}
double read_f64_attribute(hid_t loc, const std::string& name, const std::string& where) {
  return read_scalar_attribute<double>(loc, name, where);
}

std::string read_string_attribute(hid_t loc, const std::string& name, const std::string& where) {
  Handle attr = open_attribute(loc, name, where);
  Handle type(H5Aget_type(attr.get()), H5Tclose);
  if (H5Tget_class(type.get()) != H5T_STRING) {
    throw MalformedFileError(where + "@" + name, "expected a string attribute");
  }
  if (H5Tis_variable_str(type.get()) > 0) {
    char* raw = nullptr;
    Handle mem = variable_string_type();
    if (H5Aread(attr.get(), mem.get(), &raw) < 0) {
      throw MalformedFileError(where + "@" + name, "cannot read attribute");
    }
    std::string out = raw != nullptr ? raw : "";
    H5free_memory(raw);
    return out;
  }
  const std::size_t size = H5Tget_size(type.get());
  std::string buffer(size, '\0');
  if (size > 0 && H5Aread(attr.get(), type.get(), buffer.data()) < 0) {
    throw MalformedFileError(where + "@" + name, "cannot read attribute");
  }
  const auto end = buffer.find('\0');
  if (end != std::string::npos) buffer.resize(end);
  return buffer;
}

}  // namespace meshfield::h5
