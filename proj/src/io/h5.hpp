#pragma once

// Thin RAII layer over the HDF5 C API. Internal to the io module.

#include <hdf5.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace meshfield::h5 {

/// Owning hid_t with the matching close function.
class Handle {
 public:
  using Closer = herr_t (*)(hid_t);

  Handle() = default;
  Handle(hid_t id, Closer closer) : id_(id), closer_(closer) {}
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : id_(std::exchange(o.id_, H5I_INVALID_HID)), closer_(o.closer_) {}
  Handle& operator=(Handle&& o) noexcept {
    if (this != &o) {
      reset();
      id_ = std::exchange(o.id_, H5I_INVALID_HID);
      closer_ = o.closer_;
    }
    return *this;
  }
  ~Handle() { reset(); }

  hid_t get() const { return id_; }
  explicit operator bool() const { return id_ >= 0; }

 private:
  void reset() {
    if (id_ >= 0 && closer_ != nullptr) closer_(id_);
    id_ = H5I_INVALID_HID;
  }

  hid_t id_ = H5I_INVALID_HID;
  Closer closer_ = nullptr;
};

/// Turns off the library's automatic error-stack printing.
void silence_errors();

Handle create_file(const std::string& path);
/// Throws FileNotFoundError / MalformedFileError.
Handle open_file(const std::string& path);

/// True if every component of the absolute or relative `path` exists.
bool exists(hid_t loc, const std::string& path);

/// Creates a group tracking link creation order.
Handle create_group(hid_t loc, const std::string& name);
Handle open_group(hid_t loc, const std::string& path);

/// Child link names in creation order when tracked, else in name order.
std::vector<std::string> child_names(hid_t group);

struct Dims {
  std::vector<hsize_t> extents;
  std::size_t total() const {
    std::size_t n = 1;
    for (auto e : extents) n *= static_cast<std::size_t>(e);
    return n;
  }
};

void write_dataset(hid_t loc, const std::string& name, const Dims& dims, const double* data);
void write_dataset(hid_t loc, const std::string& name, const Dims& dims, const std::uint32_t* data);
void write_dataset(hid_t loc, const std::string& name, const Dims& dims, const std::int32_t* data);
void write_string_dataset(hid_t loc, const std::string& name, const std::vector<std::string>& values);

/// Reads a dataset converting to the requested native type. `where` names the
/// dataset in error messages.
template <typename T>
std::vector<T> read_dataset(hid_t loc, const std::string& name, Dims& dims, const std::string& where);
std::vector<std::string> read_string_dataset(hid_t loc, const std::string& name,
                                             const std::string& where);

void write_attribute(hid_t loc, const std::string& name, std::uint32_t value);
void write_attribute(hid_t loc, const std::string& name, std::uint8_t value);
void write_attribute(hid_t loc, const std::string& name, double value);
void write_attribute(hid_t loc, const std::string& name, const std::string& value);

bool has_attribute(hid_t loc, const std::string& name);
std::uint32_t read_u32_attribute(hid_t loc, const std::string& name, const std::string& where);
std::uint8_t read_u8_attribute(hid_t loc, const std::string& name, const std::string& where);
double read_f64_attribute(hid_t loc, const std::string& name, const std::string& where);
std::string read_string_attribute(hid_t loc, const std::string& name, const std::string& where);

}  // namespace meshfield::h5
