// Command-line front end: file-to-file operations on CFS (HDF5) result files.
//
// Exit codes: 0 success, 2 usage or input error, 1 internal error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "meshfield/core/error.hpp"
#include "meshfield/core/geometry.hpp"
#include "meshfield/core/log.hpp"
#include "meshfield/core/parallel.hpp"
#include "meshfield/extras/extras.hpp"
#include "meshfield/interp/idw.hpp"
#include "meshfield/interp/node_cell.hpp"
#include "meshfield/interp/projection.hpp"
#include "meshfield/interp/rbf.hpp"
#include "meshfield/io/cfs.hpp"
#include "meshfield/signal/signal.hpp"
#include "meshfield/transforms/transforms.hpp"

namespace fs = std::filesystem;
using namespace meshfield;

namespace {

/// Input problems detected by the CLI itself (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Eigen::Vector3d vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

/// Picks `wanted`, or the only region of the mesh when `wanted` is empty.
std::string pick_region(const Mesh& mesh, const std::string& wanted, const char* role) {
  if (!wanted.empty()) {
    mesh.region(wanted);
    return wanted;
  }
  if (mesh.regions().size() != 1) {
    throw UsageError(std::string("the ") + role + " mesh has " + std::to_string(mesh.regions().size()) +
                     " regions; choose one with --" + role + "-region");
  }
  return mesh.regions()[0].name;
}

/// Picks the array of `quantity` (on `region` if given), or the only array.
const ResultArray& pick_array(const ResultContainer& results, const std::string& quantity, const std::string& region) {
  std::vector<const ResultArray*> hits;
  for (const auto& a : results.arrays()) {
    if ((quantity.empty() || a.quantity() == quantity) && (region.empty() || a.region() == region)) hits.push_back(&a);
  }
  if (hits.size() == 1) return *hits[0];
  std::string msg = hits.empty() ? "no result matches" : "several results match";
  msg += " (quantity '" + quantity + "', region '" + region + "'); available:";
  for (const auto& a : results.arrays()) msg += " " + a.quantity() + "@" + a.region();
  throw UsageError(msg);
}

Eigen::MatrixX3d dof_points(const Mesh& mesh, const std::string& region, ResType type) {
  if (type == ResType::NODE) return region_node_coordinates(mesh, mesh.region(region));
  if (type == ResType::ELEMENT) return compute_centroids(mesh, region);
  throw UsageError("interpolation needs node or element results, not history data");
}

ResType res_type_from(const std::string& s) { return s == "element" ? ResType::ELEMENT : ResType::NODE; }

// ---------------------------------------------------------------- info

int cmd_info(const fs::path& path) {
  io::CfsReader reader(path);
  const Mesh mesh = reader.read_mesh();
  const MeshInfo& info = mesh.info();
  std::cout << "file: " << path.string() << "\n"
            << "num_nodes: " << info.num_nodes << "\n"
            << "num_elements: " << info.num_elements << "\n"
            << "dimension: " << info.dimension << "\n";
  for (const auto& [type, count] : info.type_counts) std::cout << "element_type " << to_string(type) << ": " << count << "\n";
  std::cout << "regions: " << mesh.regions().size() << "\n";
  for (const auto& r : mesh.regions()) {
    std::cout << "  " << r.name << ": dimension " << r.dimension << ", " << r.node_ids.size() << " nodes, "
              << r.element_ids.size() << " elements" << (r.is_group ? " (group)" : "") << "\n";
  }
  const auto ids = reader.multi_step_ids();
  if (ids.empty()) {
    std::cout << "no results\n";
    return 0;
  }
  for (int id : ids) {
    const ResultContainer results = reader.read_multi_step(id);
    std::cout << "multi_step " << id << ": " << to_string(results.analysis_type()) << ", "
              << results.step_values().size() << " steps\n";
    for (const auto& a : results.arrays()) {
      std::cout << "  " << a.quantity() << " on " << a.region() << " (" << to_string(a.res_type()) << "), shape (";
      for (std::size_t i = 0; i < a.shape().size(); ++i) std::cout << (i ? ", " : "") << a.shape()[i];
      std::cout << "), " << (a.is_complex() ? "complex" : "real") << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------- convert

int cmd_convert(const fs::path& input, const fs::path& output, std::string from, int multi_step) {
  if (from.empty()) {
    const auto ext = input.extension().string();
    if (ext == ".stl" || ext == ".STL") from = "stl";
    else if (ext == ".case") from = "ensight";
    else if (ext == ".cfs" || ext == ".h5" || ext == ".hdf5") from = "cfs";
    else throw UsageError("cannot infer the input format of '" + input.string() + "'; pass --from");
  }
  if (from == "stl") {
    io::write_file(output, extras::read_stl(input));
  } else if (from == "ensight") {
    const auto data = extras::read_ensight_case(input);
    io::write_file(output, data.mesh, data.results);
  } else {
    io::CfsReader reader(input);
    const Mesh mesh = reader.read_mesh();
    io::write_file(output, mesh, reader.has_results() ? reader.read_multi_step(multi_step) : ResultContainer());
  }
  return 0;
}

// ---------------------------------------------------------------- interpolate

struct InterpolateArgs {
  fs::path source, target, output;
  std::string method = "idw";
  std::string quantity, source_region, target_region;
  std::string target_res;  // empty: same as the source
  int multi_step = 1;
  // idw
  Index neighbors = 20;
  double exponent = 2.0;
  std::string search = "auto";
  // projection
  double max_distance = 1.0;
  double search_radius = 1.0;
  std::vector<double> direction;
  // rbf
  std::string kernel = "gaussian";
  std::string mode = "global";
  std::string tail;
  double epsilon = 1.0;
  double smoothing = 0.0;
  Index min_neighbors = 5;
  double radius_factor = 1.5;
};

interp::RbfConfig rbf_config(const InterpolateArgs& a) {
  interp::RbfConfig c;
  c.kernel = a.kernel == "multiquadric" ? interp::RbfKernel::Multiquadric
             : a.kernel == "wendland_c2" ? interp::RbfKernel::WendlandC2
                                         : interp::RbfKernel::Gaussian;
  c.epsilon = a.epsilon;
  c.smoothing = a.smoothing;
  c.neighbors = a.neighbors;
  c.min_neighbors = a.min_neighbors;
  c.radius_factor = a.radius_factor;
  if (a.tail == "none") c.polynomial = interp::PolynomialTail::None;
  if (a.tail == "constant") c.polynomial = interp::PolynomialTail::Constant;
  if (a.tail == "linear") c.polynomial = interp::PolynomialTail::Linear;
  return c;
}

/// RBF interpolation of every step and dimension of `values` at `targets`.
ResultArray rbf_map(const ResultArray& values, const Eigen::MatrixX3d& sources, const Eigen::MatrixX3d& targets,
                    const InterpolateArgs& args, const std::string& region, ResType res_type) {
  const Index n = values.num_steps(), m = values.num_dofs(), d = values.num_dims();
  const interp::RbfMode mode = args.mode == "local" ? interp::RbfMode::Local : interp::RbfMode::Global;
  auto map_part = [&](const ResultArray::Data& data) {
    // Columns of `columns` are (step, dim) pairs.
    Eigen::MatrixXd columns(m, n * d);
    for (Index k = 0; k < n; ++k)
      for (Index j = 0; j < m; ++j)
        for (Index c = 0; c < d; ++c) columns(j, k * d + c) = data(k, j * d + c);
    const Eigen::MatrixXd mapped = interp::rbf_interpolate(sources, columns, targets, rbf_config(args), mode);
    ResultArray::Data out(n, targets.rows() * d);
    for (Index k = 0; k < n; ++k)
      for (Index j = 0; j < targets.rows(); ++j)
        for (Index c = 0; c < d; ++c) out(k, j * d + c) = mapped(j, k * d + c);
    return out;
  };
  ResultMeta meta = values.meta();
  meta.region = region;
  meta.res_type = res_type;
  return ResultArray(meta, {n, targets.rows(), d}, values.step_values(), map_part(values.real()),
                     values.is_complex() ? map_part(values.imag()) : ResultArray::Data());
}

int cmd_interpolate(const InterpolateArgs& args) {
  io::CfsReader source_reader(args.source);
  const Mesh source_mesh = source_reader.read_mesh();
  const ResultContainer source_results = source_reader.read_multi_step(args.multi_step);
  const ResultArray& values = pick_array(source_results, args.quantity, args.source_region);
  if (!values.is_field()) throw UsageError("interpolation needs node or element results, not history data");
  const Mesh target_mesh = io::read_mesh(args.target);
  const bool same_mesh_method = args.method == "n2c" || args.method == "c2n";
  const std::string target_region = same_mesh_method && args.target_region.empty()
                                        ? values.region()
                                        : pick_region(target_mesh, args.target_region, "target");
  ResType target_res = args.target_res.empty() ? values.res_type() : res_type_from(args.target_res);

  ResultArray mapped;
  std::size_t unmatched = 0;
  if (same_mesh_method) {
    if (!(source_mesh == target_mesh)) throw UsageError(args.method + " needs source and target on the same mesh");
    const bool n2c = args.method == "n2c";
    if (values.res_type() != (n2c ? ResType::NODE : ResType::ELEMENT)) {
      throw UsageError(args.method + " needs " + (n2c ? "node" : "element") + " results");
    }
    const auto op = n2c ? interp::node2cell_matrix(target_mesh, target_region)
                        : interp::cell2node_matrix(target_mesh, target_region);
    if (values.region() != target_region) throw UsageError(args.method + " maps within one region; target region differs");
    mapped = interp::apply(op, values);
    unmatched = op.unmatched_rows().size();
  } else if (args.method == "idw" || args.method == "projection") {
    interp::InterpolationMatrix op;
    if (args.method == "idw") {
      interp::IdwConfig config;
      config.neighbors = args.neighbors;
      config.exponent = args.exponent;
      config.direction = args.search == "forward"    ? interp::IdwDirection::Forward
                         : args.search == "backward" ? interp::IdwDirection::Backward
                                                     : interp::IdwDirection::Auto;
      op = interp::build_idw(dof_points(source_mesh, values.region(), values.res_type()),
                             dof_points(target_mesh, target_region, target_res), config,
                             {values.region(), values.res_type()}, {target_region, target_res});
    } else {
      if (values.res_type() != ResType::NODE || target_res != ResType::NODE) {
        throw UsageError("projection maps node results to target nodes");
      }
      interp::ProjectionConfig config;
      config.max_distance = args.max_distance;
      config.search_radius = args.search_radius;
      if (!args.direction.empty()) config.direction = vec3(args.direction);
      op = interp::build_projection(source_mesh, values.region(), target_mesh, target_region, config);
    }
    mapped = interp::apply(op, values);
    unmatched = op.unmatched_rows().size();
  } else {
    mapped = rbf_map(values, dof_points(source_mesh, values.region(), values.res_type()),
                     dof_points(target_mesh, target_region, target_res), args, target_region, target_res);
  }

  ResultContainer out(source_results.analysis_type(), source_results.multi_step_id());
  out.add(std::move(mapped));
  io::write_file(args.output, target_mesh, out);
  std::cout << "unmatched rows: " << unmatched << "\n";
  return 0;
}

// ---------------------------------------------------------------- derivative, gradient, fft

/// Applies `op` to the selected arrays (all when no quantity is given). The
/// output keeps the input analysis type unless `out_type` is set.
template <typename Op>
int map_arrays(const fs::path& input, const fs::path& output, const std::string& quantity, int multi_step,
               std::optional<AnalysisType> out_type, Op op) {
  io::CfsReader reader(input);
  const Mesh mesh = reader.read_mesh();
  const ResultContainer results = reader.read_multi_step(multi_step);
  ResultContainer out(out_type.value_or(results.analysis_type()), results.multi_step_id());
  for (const auto& a : results.arrays()) {
    if (quantity.empty() || a.quantity() == quantity) out.add(op(mesh, a));
  }
  if (out.empty()) throw UsageError("no result named '" + quantity + "' in " + input.string());
  io::write_file(output, mesh, out);
  return 0;
}

// ---------------------------------------------------------------- fit, transform

int cmd_fit(const fs::path& source, const fs::path& target, const std::string& source_region,
            const std::string& target_region, int max_iterations, const std::vector<double>& init) {
  const Mesh src = io::read_mesh(source);
  const Mesh tgt = io::read_mesh(target);
  std::optional<transforms::RigidTransform> start;
  if (!init.empty()) start = transforms::RigidTransform{vec3({init[0], init[1], init[2]}), vec3({init[3], init[4], init[5]})};
  transforms::FitOptions options;
  options.max_iterations = max_iterations;
  const auto fit = transforms::fit_mesh(src, pick_region(src, source_region, "source"), tgt,
                                        pick_region(tgt, target_region, "target"), start, options);
  const auto& t = fit.transform;
  std::ostringstream line;
  line.precision(12);
  line << t.translation.x() << ' ' << t.translation.y() << ' ' << t.translation.z() << ' ' << t.euler_angles.x() << ' '
       << t.euler_angles.y() << ' ' << t.euler_angles.z();
  std::cout << line.str() << "\n";
  std::cerr << "objective " << fit.objective << " after " << fit.iterations << " iterations\n";
  return 0;
}

int cmd_transform(const fs::path& input, const fs::path& output, const std::vector<double>& translate,
                  const std::vector<double>& euler, const std::vector<std::string>& regions,
                  const std::vector<std::string>& vectors, int multi_step) {
  io::CfsReader reader(input);
  const Mesh mesh = reader.read_mesh();
  const ResultContainer results = reader.has_results() ? reader.read_multi_step(multi_step) : ResultContainer();
  transforms::RigidTransform transform{vec3(translate), vec3(euler)};

  std::vector<ResultArray> rotate;
  for (const auto& a : results.arrays()) {
    if (std::find(vectors.begin(), vectors.end(), a.quantity()) != vectors.end()) rotate.push_back(a);
  }
  for (const auto& q : vectors) {
    if (std::none_of(rotate.begin(), rotate.end(), [&](const ResultArray& a) { return a.quantity() == q; })) {
      throw UsageError("no result named '" + q + "' to rotate");
    }
  }
  const auto moved = transforms::transform_mesh_data(mesh, regions, transform, rotate);
  ResultContainer out(results.analysis_type(), results.multi_step_id());
  for (const auto& a : results.arrays()) {
    const auto hit = std::find_if(moved.arrays.begin(), moved.arrays.end(), [&](const ResultArray& r) {
      return r.quantity() == a.quantity() && r.region() == a.region();
    });
    out.add(hit != moved.arrays.end() ? *hit : a);
  }
  io::write_file(output, moved.mesh, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();

  CLI::App app{"meshfield: mesh and result-file processing for CFS (HDF5) files"};
  app.require_subcommand(1);
  int multi_step = 1;
  app.add_option("--multi-step", multi_step, "Multi-step id to read")->check(CLI::PositiveNumber);

  std::function<int()> run;

  auto* info = app.add_subcommand("info", "Print mesh, region and result summary");
  fs::path info_file;
  info->add_option("file", info_file)->required();
  info->callback([&] { run = [&] { return cmd_info(info_file); }; });

  auto* convert = app.add_subcommand("convert", "Convert STL, EnSight Gold or CFS input to a CFS file");
  fs::path conv_in, conv_out;
  std::string from;
  convert->add_option("input", conv_in)->required();
  convert->add_option("output", conv_out)->required();
  convert->add_option("--from", from, "Input format (default: from the file extension)")
      ->check(CLI::IsMember({"stl", "ensight", "cfs"}));
  convert->callback([&] { run = [&] { return cmd_convert(conv_in, conv_out, from, multi_step); }; });

  auto* interpolate = app.add_subcommand("interpolate", "Map a result from a source mesh onto a target mesh");
  InterpolateArgs ia;
  interpolate->add_option("source", ia.source)->required();
  interpolate->add_option("target", ia.target, "File providing the target mesh")->required();
  interpolate->add_option("output", ia.output)->required();
  interpolate->add_option("--method", ia.method)->check(CLI::IsMember({"n2c", "c2n", "idw", "projection", "rbf"}));
  interpolate->add_option("--quantity", ia.quantity);
  interpolate->add_option("--source-region", ia.source_region);
  interpolate->add_option("--target-region", ia.target_region);
  interpolate->add_option("--target-res", ia.target_res, "DOFs of the output (default: as the source)")
      ->check(CLI::IsMember({"node", "element"}));
  interpolate->add_option("--neighbors", ia.neighbors, "idw and local rbf")->check(CLI::PositiveNumber);
  interpolate->add_option("--exponent", ia.exponent, "idw Shepard exponent");
  interpolate->add_option("--search", ia.search, "idw neighbour search")->check(CLI::IsMember({"auto", "forward", "backward"}));
  interpolate->add_option("--max_distance", ia.max_distance, "projection");
  interpolate->add_option("--search_radius", ia.search_radius, "projection");
  interpolate->add_option("--direction", ia.direction, "projection direction x,y,z (default: target normals)")
      ->delimiter(',')->expected(3);
  interpolate->add_option("--kernel", ia.kernel)->check(CLI::IsMember({"gaussian", "multiquadric", "wendland_c2"}));
  interpolate->add_option("--mode", ia.mode, "rbf")->check(CLI::IsMember({"global", "local"}));
  interpolate->add_option("--tail", ia.tail, "rbf polynomial tail")->check(CLI::IsMember({"none", "constant", "linear"}));
  interpolate->add_option("--epsilon", ia.epsilon, "rbf shape parameter");
  interpolate->add_option("--smoothing", ia.smoothing, "rbf");
  interpolate->add_option("--min_neighbors", ia.min_neighbors, "local rbf")->check(CLI::PositiveNumber);
  interpolate->add_option("--radius_factor", ia.radius_factor, "local rbf");
  interpolate->callback([&] {
    ia.multi_step = multi_step;
    run = [&] { return cmd_interpolate(ia); };
  });

  auto* derivative = app.add_subcommand("derivative", "Time derivative of transient results");
  fs::path der_in, der_out;
  std::string der_q, boundary = "remove";
  derivative->add_option("input", der_in)->required();
  derivative->add_option("output", der_out)->required();
  derivative->add_option("--quantity", der_q, "Only this quantity (default: all)");
  derivative->add_option("--boundary", boundary)->check(CLI::IsMember({"remove", "none", "one-sided", "one_sided"}));
  derivative->callback([&] {
    run = [&] {
      const auto b = signal::boundary_treatment_from_string(boundary);
      return map_arrays(der_in, der_out, der_q, multi_step, AnalysisType::TRANSIENT,
                        [&](const Mesh&, const ResultArray& a) { return signal::time_derivative(a, b); });
    };
  });

  auto* gradient = app.add_subcommand("gradient", "Spatial RBF gradient of scalar results");
  fs::path grad_in, grad_out;
  std::string grad_q;
  InterpolateArgs ga;
  ga.mode = "local";
  gradient->add_option("input", grad_in)->required();
  gradient->add_option("output", grad_out)->required();
  gradient->add_option("--quantity", grad_q);
  gradient->add_option("--kernel", ga.kernel)->check(CLI::IsMember({"gaussian", "multiquadric", "wendland_c2"}));
  gradient->add_option("--mode", ga.mode)->check(CLI::IsMember({"global", "local"}));
  gradient->add_option("--tail", ga.tail)->check(CLI::IsMember({"none", "constant", "linear"}));
  gradient->add_option("--epsilon", ga.epsilon);
  gradient->add_option("--smoothing", ga.smoothing);
  gradient->add_option("--neighbors", ga.neighbors)->check(CLI::PositiveNumber);
  gradient->add_option("--min_neighbors", ga.min_neighbors)->check(CLI::PositiveNumber);
  gradient->add_option("--radius_factor", ga.radius_factor);
  gradient->callback([&] {
    run = [&] {
      const auto mode = ga.mode == "local" ? interp::RbfMode::Local : interp::RbfMode::Global;
      return map_arrays(grad_in, grad_out, grad_q, multi_step, std::nullopt, [&](const Mesh& mesh, const ResultArray& a) {
        return interp::spatial_gradient(mesh, a, rbf_config(ga), mode);
      });
    };
  });

  auto* fft = app.add_subcommand("fft", "One-sided amplitude spectrum of transient results");
  fs::path fft_in, fft_out;
  std::string fft_q;
  bool hann = false;
  fft->add_option("input", fft_in)->required();
  fft->add_option("output", fft_out)->required();
  fft->add_option("--quantity", fft_q);
  fft->add_flag("--hann", hann, "Apply an amplitude-corrected Hann window");
  fft->callback([&] {
    run = [&] {
      return map_arrays(fft_in, fft_out, fft_q, multi_step, AnalysisType::HARMONIC,
                        [&](const Mesh&, const ResultArray& a) { return signal::field_fft(a, {hann}); });
    };
  });

  auto* fit = app.add_subcommand("fit", "Rigidly register a source region onto a target region");
  fs::path fit_src, fit_tgt;
  std::string fit_sr, fit_tr;
  int max_iterations = 500;
  std::vector<double> init;
  fit->add_option("source", fit_src)->required();
  fit->add_option("target", fit_tgt)->required();
  fit->add_option("--source-region", fit_sr);
  fit->add_option("--target-region", fit_tr);
  fit->add_option("--max-iterations", max_iterations)->check(CLI::PositiveNumber);
  fit->add_option("--init", init, "Start point tx,ty,tz,alpha,beta,gamma")->delimiter(',')->expected(6);
  fit->callback([&] { run = [&] { return cmd_fit(fit_src, fit_tgt, fit_sr, fit_tr, max_iterations, init); }; });

  auto* transform = app.add_subcommand("transform", "Apply a rigid transform to a mesh and vector results");
  fs::path tr_in, tr_out;
  std::vector<double> translate{0, 0, 0}, euler{0, 0, 0};
  std::vector<std::string> regions, vectors;
  transform->add_option("input", tr_in)->required();
  transform->add_option("output", tr_out)->required();
  transform->add_option("--translate", translate, "x,y,z")->delimiter(',')->expected(3);
  transform->add_option("--euler", euler, "alpha,beta,gamma in radians: R = Rz(gamma) Ry(beta) Rx(alpha)")
      ->delimiter(',')->expected(3);
  transform->add_option("--regions", regions, "Regions to move (default: whole mesh)")->delimiter(',');
  transform->add_option("--vector", vectors, "Vector quantities to rotate")->delimiter(',');
  transform->callback([&] { run = [&] { return cmd_transform(tr_in, tr_out, translate, euler, regions, vectors, multi_step); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
