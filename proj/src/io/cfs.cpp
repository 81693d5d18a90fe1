#include "meshfield/io/cfs.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "h5.hpp"
#include "meshfield/core/error.hpp"
#include "meshfield/core/log.hpp"

namespace meshfield::io {
namespace {

constexpr std::uint32_t kDefinedOnNodes = 1;
constexpr std::uint32_t kDefinedOnElements = 4;

std::string multi_step_name(int id) { return "MultiStep_" + std::to_string(id); }

std::optional<int> parse_suffix(const std::string& name, const std::string& prefix) {
  if (!name.starts_with(prefix) || name.size() == prefix.size()) return std::nullopt;
  int value = 0;
  for (std::size_t i = prefix.size(); i < name.size(); ++i) {
    if (name[i] < '0' || name[i] > '9') return std::nullopt;
    value = value * 10 + (name[i] - '0');
    if (value > 1'000'000'000) return std::nullopt;
  }
  return value;
}

void check_name(const std::string& kind, const std::string& name) {
  if (name.empty() || name.find('/') != std::string::npos || name == "." || name == "..") {
    throw ValidationError("invalid " + kind + " name for HDF5 storage: '" + name + "'");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Reader

struct CfsReader::Impl {
  std::string path;
  h5::Handle file;
  std::vector<std::string> log;

  void note(const std::string& p) { log.push_back(p); }

  template <typename T>
  std::vector<T> dataset(hid_t loc, const std::string& where, const std::string& name,
                         h5::Dims& dims) {
    note(where + "/" + name);
    return h5::read_dataset<T>(loc, name, dims, where);
  }

  std::vector<std::string> strings(hid_t loc, const std::string& where, const std::string& name) {
    note(where + "/" + name);
    return h5::read_string_dataset(loc, name, where);
  }

  std::uint32_t u32_attr(hid_t loc, const std::string& where, const std::string& name) {
    note(where + "@" + name);
    return h5::read_u32_attribute(loc, name, where);
  }

  double f64_attr(hid_t loc, const std::string& where, const std::string& name) {
    note(where + "@" + name);
    return h5::read_f64_attribute(loc, name, where);
  }

  AnalysisType analysis_attr(hid_t loc, const std::string& where) {
    note(where + "@AnalysisType");
    const auto text = h5::read_string_attribute(loc, "AnalysisType", where);
    auto type = analysis_type_from_string(text);
    if (!type) throw MalformedFileError(where + "@AnalysisType", "unknown analysis type '" + text + "'");
    return *type;
  }

  std::vector<int> ids_under(const std::string& group_path) const {
    std::vector<int> ids;
    if (!h5::exists(file.get(), group_path)) return ids;
    auto group = h5::open_group(file.get(), group_path);
    for (const auto& name : h5::child_names(group.get())) {
      if (auto id = parse_suffix(name, "MultiStep_")) ids.push_back(*id);
    }
    return ids;
  }

  std::vector<ResultArray> read_field(int id, AnalysisType& analysis, Eigen::VectorXd& steps);
  std::vector<ResultArray> read_history(int id, AnalysisType& analysis, Eigen::VectorXd& steps);
};

CfsReader::CfsReader(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
  impl_->path = path.string();
  impl_->file = h5::open_file(impl_->path);
}

CfsReader::~CfsReader() = default;
CfsReader::CfsReader(CfsReader&&) noexcept = default;
CfsReader& CfsReader::operator=(CfsReader&&) noexcept = default;

const std::vector<std::string>& CfsReader::access_log() const { return impl_->log; }

Mesh CfsReader::read_mesh() {
  auto& d = *impl_;
  const hid_t f = d.file.get();
  auto mesh_group = h5::open_group(f, "/Mesh");

  h5::Dims dims;
  auto nodes_group = h5::open_group(f, "/Mesh/Nodes");
  auto elements_group = h5::open_group(f, "/Mesh/Elements");
  auto coord_data = d.dataset<double>(nodes_group.get(), "/Mesh/Nodes", "Coordinates", dims);
  if (dims.extents.size() != 2 || dims.extents[1] != 3) {
    throw MalformedFileError("/Mesh/Nodes/Coordinates", "expected a [num_nodes x 3] dataset");
  }
  const auto num_nodes = static_cast<Index>(dims.extents[0]);
  Coordinates coords = Eigen::Map<Coordinates>(coord_data.data(), num_nodes, 3);

  auto type_codes = d.dataset<std::int64_t>(elements_group.get(), "/Mesh/Elements", "Types", dims);
  if (dims.extents.size() != 1) {
    throw MalformedFileError("/Mesh/Elements/Types", "expected a 1-D dataset");
  }
  std::vector<ElementType> types;
  types.reserve(type_codes.size());
  for (auto code : type_codes) {
    auto t = element_type_from_code(code);
    if (!t) {
      throw MalformedFileError("/Mesh/Elements/Types", "unknown element code " + std::to_string(code));
    }
    types.push_back(*t);
  }

  auto conn_data = d.dataset<std::uint32_t>(elements_group.get(), "/Mesh/Elements", "Connectivity", dims);
  if (dims.extents.size() != 2 || dims.extents[0] != types.size()) {
    throw MalformedFileError("/Mesh/Elements/Connectivity",
                             "expected a [num_elements x max_nodes] dataset");
  }
  Connectivity conn = Eigen::Map<Connectivity>(conn_data.data(), static_cast<Index>(dims.extents[0]),
                                               static_cast<Index>(dims.extents[1]));

  Mesh mesh;
  try {
    mesh = Mesh(std::move(coords), std::move(types), std::move(conn));
  } catch (const ValidationError& e) {
    throw MalformedFileError("/Mesh/Elements/Connectivity", e.what());
  }

  if (h5::exists(f, "/Mesh/Regions")) {
    auto regions = h5::open_group(f, "/Mesh/Regions");
    for (const auto& name : h5::child_names(regions.get())) {
      const std::string where = "/Mesh/Regions/" + name;
      auto g = h5::open_group(f, where);
      Region r;
      r.name = name;
      r.node_ids = d.dataset<std::uint32_t>(g.get(), where, "Nodes", dims);
      r.element_ids = d.dataset<std::uint32_t>(g.get(), where, "Elements", dims);
      r.dimension = static_cast<int>(d.u32_attr(g.get(), where, "Dimension"));
      d.note(where + "@IsGroup");
      r.is_group = h5::read_u8_attribute(g.get(), "IsGroup", where) != 0;
      try {
        mesh.add_region(std::move(r));
      } catch (const ValidationError& e) {
        throw MalformedFileError(where, e.what());
      }
    }
  }

  d.note("/Mesh@Dimension");
  const auto stored_dim = h5::read_u32_attribute(mesh_group.get(), "Dimension", "/Mesh");
  if (static_cast<int>(stored_dim) != mesh.info().dimension) {
    log_warning("/Mesh@Dimension is " + std::to_string(stored_dim) + " but elements imply " +
                std::to_string(mesh.info().dimension));
  }
  return mesh;
}

bool CfsReader::has_results() const { return !multi_step_ids().empty(); }

std::vector<int> CfsReader::multi_step_ids() const {
  std::set<int> ids;
  for (int id : impl_->ids_under("/Results/Mesh")) ids.insert(id);
  for (int id : impl_->ids_under("/Results/History")) ids.insert(id);
  return {ids.begin(), ids.end()};
}

std::vector<ResultArray> CfsReader::Impl::read_field(int id, AnalysisType& analysis,
                                                     Eigen::VectorXd& steps) {
  const hid_t f = file.get();
  const std::string ms = "/Results/Mesh/" + multi_step_name(id);
  auto ms_group = h5::open_group(f, ms);
  analysis = analysis_attr(ms_group.get(), ms);

  struct Step {
    int number;
    double value;
    std::string name;
  };
  std::vector<Step> step_list;
  for (const auto& name : h5::child_names(ms_group.get())) {
    auto k = parse_suffix(name, "Step_");
    if (!k) continue;
    auto g = h5::open_group(f, ms + "/" + name);
    step_list.push_back({*k, f64_attr(g.get(), ms + "/" + name, "StepValue"), name});
  }
  std::stable_sort(step_list.begin(), step_list.end(), [](const Step& a, const Step& b) {
    return a.value < b.value || (a.value == b.value && a.number < b.number);
  });
  steps.resize(static_cast<Index>(step_list.size()));
  for (std::size_t i = 0; i < step_list.size(); ++i) steps(static_cast<Index>(i)) = step_list[i].value;

  const std::string desc_path = ms + "/ResultDescription";
  auto desc = h5::open_group(f, desc_path);
  std::vector<ResultArray> out;
  h5::Dims dims;
  for (const auto& quantity : h5::child_names(desc.get())) {
    const std::string qpath = desc_path + "/" + quantity;
    auto q = h5::open_group(f, qpath);
    const auto defined_on = dataset<std::uint32_t>(q.get(), qpath, "DefinedOn", dims);
    if (defined_on.size() != 1 ||
        (defined_on[0] != kDefinedOnNodes && defined_on[0] != kDefinedOnElements)) {
      throw MalformedFileError(qpath + "/DefinedOn", "expected 1 (nodes) or 4 (elements)");
    }
    const ResType res_type = defined_on[0] == kDefinedOnNodes ? ResType::NODE : ResType::ELEMENT;
    const std::string entity = res_type == ResType::NODE ? "Nodes" : "Elements";
    const auto dim_names = strings(q.get(), qpath, "DOFNames");
    const auto regions = strings(q.get(), qpath, "EntityNames");
    const auto num_dims = static_cast<Index>(dim_names.size());

    for (const auto& region : regions) {
      Index num_dofs = -1;
      bool complex = false;
      ResultArray::Data re, im;
      for (std::size_t s = 0; s < step_list.size(); ++s) {
        const std::string where = ms + "/" + step_list[s].name + "/" + quantity + "/" + region + "/" + entity;
        auto g = h5::open_group(f, where);
        auto real = dataset<double>(g.get(), where, "Real", dims);
        if (dims.extents.size() != 2 || static_cast<Index>(dims.extents[1]) != num_dims) {
          throw MalformedFileError(where + "/Real", "expected [M x " + std::to_string(num_dims) + "]");
        }
        const auto m = static_cast<Index>(dims.extents[0]);
        if (s == 0) {
          num_dofs = m;
          complex = h5::exists(g.get(), "Imag");
          re.resize(static_cast<Index>(step_list.size()), m * num_dims);
          if (complex) im.resize(re.rows(), re.cols());
        } else if (m != num_dofs) {
          throw MalformedFileError(where + "/Real", "DOF count changes between steps");
        }
        re.row(static_cast<Index>(s)) = Eigen::Map<const Eigen::RowVectorXd>(real.data(), m * num_dims);
        if (complex) {
          auto imag = dataset<double>(g.get(), where, "Imag", dims);
          if (imag.size() != real.size()) throw MalformedFileError(where + "/Imag", "shape differs from Real");
          im.row(static_cast<Index>(s)) = Eigen::Map<const Eigen::RowVectorXd>(imag.data(), m * num_dims);
        }
      }
      if (step_list.empty()) {
        num_dofs = 0;
        re.resize(0, 0);
      }
      ResultMeta meta;
      meta.quantity = quantity;
      meta.region = region;
      meta.res_type = res_type;
      meta.dim_names = dim_names;
      meta.analysis_type = analysis;
      meta.is_complex = complex;
      meta.multi_step_id = id;
      try {
        out.emplace_back(std::move(meta),
                         std::vector<Index>{static_cast<Index>(step_list.size()), num_dofs, num_dims},
                         steps, std::move(re), std::move(im));
      } catch (const ValidationError& e) {
        throw MalformedFileError(qpath, e.what());
      }
    }
  }
  return out;
}

std::vector<ResultArray> CfsReader::Impl::read_history(int id, AnalysisType& analysis,
                                                       Eigen::VectorXd& steps) {
  const hid_t f = file.get();
  const std::string ms = "/Results/History/" + multi_step_name(id);
  auto ms_group = h5::open_group(f, ms);
  analysis = analysis_attr(ms_group.get(), ms);
  h5::Dims dims;
  auto step_data = dataset<double>(ms_group.get(), ms, "StepValues", dims);
  steps = Eigen::Map<const Eigen::VectorXd>(step_data.data(), static_cast<Index>(step_data.size()));
  const auto n = steps.size();

  std::vector<ResultArray> out;
  for (const auto& quantity : h5::child_names(ms_group.get())) {
    if (quantity == "StepValues") continue;
    const std::string qpath = ms + "/" + quantity;
    auto q = h5::open_group(f, qpath);
    for (const auto& region : h5::child_names(q.get())) {
      const std::string where = qpath + "/" + region;
      auto g = h5::open_group(f, where);
      auto dim_names = strings(g.get(), where, "DOFNames");
      const auto num_dims = static_cast<Index>(dim_names.size());
      auto real = dataset<double>(g.get(), where, "Real", dims);
      if (dims.extents.size() != 2 || static_cast<Index>(dims.extents[0]) != n ||
          static_cast<Index>(dims.extents[1]) != num_dims) {
        throw MalformedFileError(where + "/Real", "expected [N x D] history data");
      }
      ResultArray::Data re = Eigen::Map<const ResultArray::Data>(real.data(), n, num_dims);
      ResultArray::Data im;
      const bool complex = h5::exists(g.get(), "Imag");
      if (complex) {
        auto imag = dataset<double>(g.get(), where, "Imag", dims);
        if (imag.size() != real.size()) throw MalformedFileError(where + "/Imag", "shape differs from Real");
        im = Eigen::Map<const ResultArray::Data>(imag.data(), n, num_dims);
      }
      ResultMeta meta;
      meta.quantity = quantity;
      meta.region = region;
      meta.res_type = ResType::REGION;
      meta.dim_names = std::move(dim_names);
      meta.analysis_type = analysis;
      meta.is_complex = complex;
      meta.multi_step_id = id;
      try {
        out.emplace_back(std::move(meta), std::vector<Index>{n, num_dims}, steps, std::move(re),
                         std::move(im));
      } catch (const ValidationError& e) {
        throw MalformedFileError(where, e.what());
      }
    }
  }
  return out;
}

ResultContainer CfsReader::read_multi_step(int multi_step_id) {
  const auto ids = multi_step_ids();
  if (std::find(ids.begin(), ids.end(), multi_step_id) == ids.end()) {
    std::string available = "[";
    for (std::size_t i = 0; i < ids.size(); ++i) available += (i ? ", " : "") + std::to_string(ids[i]);
    available += "]";
    throw MalformedFileError("/Results/Mesh/" + multi_step_name(multi_step_id),
                             "multi-step " + std::to_string(multi_step_id) +
                                 " not found; available: " + available);
  }

  std::vector<ResultArray> arrays;
  std::optional<AnalysisType> analysis;
  std::optional<Eigen::VectorXd> steps;
  auto merge = [&](std::vector<ResultArray> part, AnalysisType a, const Eigen::VectorXd& s,
                   const std::string& where) {
    if (analysis && *analysis != a) throw MalformedFileError(where, "analysis type differs between mesh and history results");
    analysis = a;
    if (!part.empty()) {
      if (steps && (steps->size() != s.size() || (steps->array() != s.array()).any())) {
        throw MalformedFileError(where, "step values differ between mesh and history results");
      }
      steps = s;
    }
    for (auto& a2 : part) arrays.push_back(std::move(a2));
  };

  const std::string name = multi_step_name(multi_step_id);
  if (h5::exists(impl_->file.get(), "/Results/Mesh/" + name)) {
    AnalysisType a{};
    Eigen::VectorXd s;
    auto part = impl_->read_field(multi_step_id, a, s);
    merge(std::move(part), a, s, "/Results/Mesh/" + name);
  }
  if (h5::exists(impl_->file.get(), "/Results/History/" + name)) {
    AnalysisType a{};
    Eigen::VectorXd s;
    auto part = impl_->read_history(multi_step_id, a, s);
    merge(std::move(part), a, s, "/Results/History/" + name);
  }

  ResultContainer container(analysis.value_or(AnalysisType::TRANSIENT), multi_step_id);
  for (auto& a : arrays) {
    try {
      container.add(std::move(a));
    } catch (const ValidationError& e) {
      throw MalformedFileError("/Results", e.what());
    }
  }
  return container;
}

// ---------------------------------------------------------------------------
// Writer

CfsWriter::CfsWriter(std::filesystem::path path) : path_(std::move(path)) {}

namespace {

void validate_results(const Mesh& mesh, const ResultContainer& result) {
  std::map<std::string, std::pair<ResType, std::vector<std::string>>> per_quantity;
  for (const auto& a : result.arrays()) {
    check_name("quantity", a.quantity());
    if (!mesh.has_region(a.region())) {
      throw ValidationError("result " + a.quantity() + " references unknown region '" + a.region() + "'");
    }
    const Region& r = mesh.region(a.region());
    if (a.res_type() == ResType::NODE && a.num_dofs() != static_cast<Index>(r.node_ids.size())) {
      throw ValidationError("result " + a.quantity() + " on " + a.region() + ": M=" +
                            std::to_string(a.num_dofs()) + " but region has " +
                            std::to_string(r.node_ids.size()) + " nodes");
    }
    if (a.res_type() == ResType::ELEMENT &&
        a.num_dofs() != static_cast<Index>(r.element_ids.size())) {
      throw ValidationError("result " + a.quantity() + " on " + a.region() + ": M=" +
                            std::to_string(a.num_dofs()) + " but region has " +
                            std::to_string(r.element_ids.size()) + " elements");
    }
    if (a.is_field()) {
      auto [it, inserted] = per_quantity.try_emplace(a.quantity(), a.res_type(), a.dim_names());
      if (!inserted && (it->second.first != a.res_type() || it->second.second != a.dim_names())) {
        throw ValidationError("field quantity " + a.quantity() +
                              " must use one ResType and one set of dim names across regions");
      }
    }
    if (!is_known_quantity(a.quantity())) {
      log_warning("quantity '" + a.quantity() + "' is not an openCFS field name");
    }
  }
}

void write_history(hid_t results, const ResultContainer& result,
                   const std::vector<const ResultArray*>& arrays) {
  auto history = h5::create_group(results, "History");
  auto ms = h5::create_group(history.get(), multi_step_name(result.multi_step_id()));
  h5::write_attribute(ms.get(), "AnalysisType", std::string(to_string(result.analysis_type())));
  const auto& steps = result.step_values();
  h5::write_dataset(ms.get(), "StepValues", {{static_cast<hsize_t>(steps.size())}}, steps.data());
  std::map<std::string, h5::Handle> quantity_groups;
  for (const auto* a : arrays) {
    auto it = quantity_groups.find(a->quantity());
    if (it == quantity_groups.end()) {
      it = quantity_groups.emplace(a->quantity(), h5::create_group(ms.get(), a->quantity())).first;
    }
    auto g = h5::create_group(it->second.get(), a->region());
    const h5::Dims dims{{static_cast<hsize_t>(a->num_steps()), static_cast<hsize_t>(a->num_dims())}};
    h5::write_dataset(g.get(), "Real", dims, a->real().data());
    if (a->is_complex()) h5::write_dataset(g.get(), "Imag", dims, a->imag().data());
    h5::write_string_dataset(g.get(), "DOFNames", a->dim_names());
  }
}

void write_field(hid_t results, const ResultContainer& result,
                 const std::vector<const ResultArray*>& arrays) {
  const auto& steps = result.step_values();
  const auto n = steps.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return steps(a) < steps(b); });

  auto mesh_results = h5::create_group(results, "Mesh");
  auto ms = h5::create_group(mesh_results.get(), multi_step_name(result.multi_step_id()));
  h5::write_attribute(ms.get(), "AnalysisType", std::string(to_string(result.analysis_type())));
  h5::write_attribute(ms.get(), "LastStepNum", static_cast<std::uint32_t>(n));
  h5::write_attribute(ms.get(), "LastStepValue", n > 0 ? steps(order.back()) : 0.0);

  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    auto step = h5::create_group(ms.get(), "Step_" + std::to_string(k + 1));
    h5::write_attribute(step.get(), "StepValue", steps(src));
    std::map<std::string, h5::Handle> quantity_groups;
    for (const auto* a : arrays) {
      auto it = quantity_groups.find(a->quantity());
      if (it == quantity_groups.end()) {
        it = quantity_groups.emplace(a->quantity(), h5::create_group(step.get(), a->quantity())).first;
      }
      auto region = h5::create_group(it->second.get(), a->region());
      auto entity = h5::create_group(region.get(), std::string(to_string(a->res_type())));
      const h5::Dims dims{{static_cast<hsize_t>(a->num_dofs()), static_cast<hsize_t>(a->num_dims())}};
      h5::write_dataset(entity.get(), "Real", dims, a->real().row(src).data());
      if (a->is_complex()) h5::write_dataset(entity.get(), "Imag", dims, a->imag().row(src).data());
    }
  }

  auto desc = h5::create_group(ms.get(), "ResultDescription");
  std::vector<std::string> quantities;
  for (const auto* a : arrays) {
    if (std::find(quantities.begin(), quantities.end(), a->quantity()) == quantities.end()) {
      quantities.push_back(a->quantity());
    }
  }
  std::vector<std::uint32_t> step_numbers(static_cast<std::size_t>(n));
  std::iota(step_numbers.begin(), step_numbers.end(), 1u);
  Eigen::VectorXd sorted_steps(n);
  for (Index k = 0; k < n; ++k) sorted_steps(k) = steps(order[static_cast<std::size_t>(k)]);
  for (const auto& quantity : quantities) {
    auto q = h5::create_group(desc.get(), quantity);
    std::vector<std::string> regions;
    const ResultArray* first = nullptr;
    for (const auto* a : arrays) {
      if (a->quantity() != quantity) continue;
      if (first == nullptr) first = a;
      regions.push_back(a->region());
    }
    const std::uint32_t defined_on =
        first->res_type() == ResType::NODE ? kDefinedOnNodes : kDefinedOnElements;
    h5::write_dataset(q.get(), "DefinedOn", {{1}}, &defined_on);
    const auto num_dofs = static_cast<std::uint32_t>(first->num_dims());
    h5::write_dataset(q.get(), "NumDOFs", {{1}}, &num_dofs);
    h5::write_string_dataset(q.get(), "DOFNames", first->dim_names());
    h5::write_string_dataset(q.get(), "EntityNames", regions);
    h5::write_dataset(q.get(), "StepNumbers", {{static_cast<hsize_t>(n)}}, step_numbers.data());
    h5::write_dataset(q.get(), "StepValues", {{static_cast<hsize_t>(n)}}, sorted_steps.data());
  }
}

}  // namespace

void CfsWriter::create_file(const Mesh& mesh, const ResultContainer& result) {
  for (const auto& r : mesh.regions()) check_name("region", r.name);
  validate_results(mesh, result);

  auto file = h5::create_file(path_.string());
  const hid_t f = file.get();

  auto mesh_group = h5::create_group(f, "Mesh");
  h5::write_attribute(mesh_group.get(), "Dimension", static_cast<std::uint32_t>(mesh.info().dimension));
  {
    auto nodes = h5::create_group(mesh_group.get(), "Nodes");
    h5::write_dataset(nodes.get(), "Coordinates",
                      {{static_cast<hsize_t>(mesh.num_nodes()), 3}}, mesh.coordinates().data());
  }
  {
    auto elements = h5::create_group(mesh_group.get(), "Elements");
    std::vector<std::int32_t> codes;
    codes.reserve(mesh.element_types().size());
    for (auto t : mesh.element_types()) codes.push_back(static_cast<std::int32_t>(t));
    h5::write_dataset(elements.get(), "Types", {{static_cast<hsize_t>(codes.size())}}, codes.data());
    const auto& conn = mesh.connectivity();
    h5::write_dataset(elements.get(), "Connectivity",
                      {{static_cast<hsize_t>(conn.rows()), static_cast<hsize_t>(conn.cols())}},
                      conn.data());
  }
  {
    auto regions = h5::create_group(mesh_group.get(), "Regions");
    for (const auto& r : mesh.regions()) {
      auto g = h5::create_group(regions.get(), r.name);
      h5::write_dataset(g.get(), "Nodes", {{static_cast<hsize_t>(r.node_ids.size())}}, r.node_ids.data());
      h5::write_dataset(g.get(), "Elements", {{static_cast<hsize_t>(r.element_ids.size())}},
                        r.element_ids.data());
      h5::write_attribute(g.get(), "Dimension", static_cast<std::uint32_t>(r.dimension));
      h5::write_attribute(g.get(), "IsGroup", static_cast<std::uint8_t>(r.is_group ? 1 : 0));
    }
  }

  if (result.empty()) return;
  std::vector<const ResultArray*> field, history;
  for (const auto& a : result.arrays()) (a.is_field() ? field : history).push_back(&a);
  auto results = h5::create_group(f, "Results");
  if (!field.empty()) write_field(results.get(), result, field);
  if (!history.empty()) write_history(results.get(), result, history);
  if (H5Fflush(f, H5F_SCOPE_GLOBAL) < 0) throw Error("HDF5 error: flushing " + path_.string());
}

// ---------------------------------------------------------------------------
// Convenience functions

Mesh read_mesh(const std::filesystem::path& path) { return CfsReader(path).read_mesh(); }

ResultContainer read_data(const std::filesystem::path& path, int multi_step_id) {
  return CfsReader(path).read_multi_step(multi_step_id);
}

std::pair<Mesh, ResultContainer> read_file(const std::filesystem::path& path, int multi_step_id) {
  CfsReader reader(path);
  Mesh mesh = reader.read_mesh();
  if (!reader.has_results()) return {std::move(mesh), ResultContainer()};
  return {std::move(mesh), reader.read_multi_step(multi_step_id)};
}

void write_file(const std::filesystem::path& path, const Mesh& mesh, const ResultContainer& result) {
  CfsWriter(path).create_file(mesh, result);
}

}  // namespace meshfield::io
