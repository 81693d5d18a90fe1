#include <gtest/gtest.h>

#include <hdf5.h>

#include <filesystem>
#include <random>

#include "meshfield/core/error.hpp"
#include "meshfield/core/mesh.hpp"
#include "meshfield/io/cfs.hpp"
#include "random_data.hpp"

using namespace meshfield;

namespace {

Mesh unit_cube() {
  Coordinates coords(8, 3);
  coords << 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1;
  Connectivity conn(1, 8);
  conn << 1, 2, 3, 4, 5, 6, 7, 8;
  Mesh mesh(coords, {ElementType::HEXA8}, conn);
  mesh.add_region(whole_mesh_region(mesh, "cube"));
  return mesh;
}

ResultArray nodal(const Mesh& mesh, const std::string& quantity, AnalysisType analysis,
                  Index steps, Index dims) {
  ResultMeta meta;
  meta.quantity = quantity;
  meta.region = mesh.regions().front().name;
  meta.analysis_type = analysis;
  const Index m = static_cast<Index>(mesh.regions().front().node_ids.size());
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(steps, 0.0, 0.1 * static_cast<double>(steps - 1));
  ResultArray::Data re = ResultArray::Data::Random(steps, m * dims);
  ResultArray::Data im = ResultArray::Data::Random(steps, m * dims);
  return ResultArray(meta, {steps, m, dims}, t, re, im);
}

class CfsIoTest : public ::testing::Test {
 protected:
  std::string path(const std::string& name) {
    auto p = fixtures::temp_path(name);
    created_.push_back(p);
    return p;
  }
  void TearDown() override {
    for (const auto& p : created_) std::filesystem::remove(p);
  }

 private:
  std::vector<std::string> created_;
};

}  // namespace

TEST_F(CfsIoTest, Line2RoundTrip) {
  Coordinates coords(2, 3);
  coords << 0.1, 0.2, 0.3, 1e-300, -4.5, 7.25;
  Connectivity conn(1, 2);
  conn << 1, 2;
  Mesh mesh(coords, {ElementType::LINE2}, conn);
  mesh.add_region(whole_mesh_region(mesh, "line"));
  const auto p = path("line.cfs");
  io::write_file(p, mesh);
  Mesh back = io::read_mesh(p);
  EXPECT_EQ(back.coordinates(), mesh.coordinates());
  EXPECT_EQ(back, mesh);
}

TEST_F(CfsIoTest, UnitCubeInfo) {
  const auto p = path("cube.cfs");
  io::write_file(p, unit_cube());
  Mesh mesh = io::read_mesh(p);
  EXPECT_EQ(mesh.info().num_nodes, 8);
  EXPECT_EQ(mesh.info().num_elements, 1);
  EXPECT_EQ(mesh.info().dimension, 3);
  EXPECT_EQ(mesh.region("cube").node_ids.size(), 8u);
}

TEST_F(CfsIoTest, MissingCoordinatesNamesThePath) {
  const auto p = path("corrupt.cfs");
  io::write_file(p, unit_cube());
  {
    hid_t f = H5Fopen(p.c_str(), H5F_ACC_RDWR, H5P_DEFAULT);
    ASSERT_GE(f, 0);
    H5Ldelete(f, "/Mesh/Nodes/Coordinates", H5P_DEFAULT);
    H5Fclose(f);
  }
  try {
    io::read_mesh(p);
    FAIL() << "expected MalformedFileError";
  } catch (const MalformedFileError& e) {
    EXPECT_EQ(e.where(), "/Mesh/Nodes/Coordinates");
  }
}

TEST_F(CfsIoTest, UnknownElementCodeIsReported) {
  const auto p = path("badcode.cfs");
  io::write_file(p, unit_cube());
  {
    hid_t f = H5Fopen(p.c_str(), H5F_ACC_RDWR, H5P_DEFAULT);
    hid_t d = H5Dopen2(f, "/Mesh/Elements/Types", H5P_DEFAULT);
    const std::int32_t code = 42;
    H5Dwrite(d, H5T_NATIVE_INT32, H5S_ALL, H5S_ALL, H5P_DEFAULT, &code);
    H5Dclose(d);
    H5Fclose(f);
  }
  try {
    io::read_mesh(p);
    FAIL() << "expected MalformedFileError";
  } catch (const MalformedFileError& e) {
    EXPECT_NE(std::string(e.what()).find("42"), std::string::npos);
  }
}

TEST_F(CfsIoTest, TransientData) {
  Mesh mesh = unit_cube();
  ResultContainer results(AnalysisType::TRANSIENT);
  results.add(nodal(mesh, "acouPressure", AnalysisType::TRANSIENT, 3, 1));
  const auto p = path("transient.cfs");
  io::write_file(p, mesh, results);
  auto data = io::read_data(p);
  EXPECT_EQ(data.analysis_type(), AnalysisType::TRANSIENT);
  ASSERT_EQ(data.arrays().size(), 1u);
  EXPECT_EQ(data.arrays()[0].num_steps(), 3);
  EXPECT_FALSE(data.arrays()[0].is_complex());
  EXPECT_EQ(data, results);
}

TEST_F(CfsIoTest, MissingMultiStepListsAvailable) {
  Mesh mesh = unit_cube();
  ResultContainer results(AnalysisType::TRANSIENT);
  results.add(nodal(mesh, "acouPressure", AnalysisType::TRANSIENT, 3, 1));
  const auto p = path("ms.cfs");
  io::write_file(p, mesh, results);
  try {
    io::read_data(p, 2);
    FAIL() << "expected MalformedFileError";
  } catch (const MalformedFileError& e) {
    EXPECT_NE(std::string(e.what()).find("available: [1]"), std::string::npos) << e.what();
  }
}

TEST_F(CfsIoTest, HarmonicDataIsComplex) {
  Mesh mesh = unit_cube();
  ResultContainer results(AnalysisType::HARMONIC);
  results.add(nodal(mesh, "acouVelocity", AnalysisType::HARMONIC, 2, 3));
  const auto p = path("harmonic.cfs");
  io::write_file(p, mesh, results);
  auto data = io::read_data(p);
  ASSERT_EQ(data.arrays().size(), 1u);
  EXPECT_TRUE(data.arrays()[0].is_complex());
  EXPECT_EQ(data.arrays()[0].imag(), results.arrays()[0].imag());
  EXPECT_EQ(data, results);
}

TEST_F(CfsIoTest, ReadFileComposition) {
  Mesh mesh = unit_cube();
  const auto mesh_only = path("mesh_only.cfs");
  io::write_file(mesh_only, mesh);
  auto [m1, r1] = io::read_file(mesh_only);
  EXPECT_EQ(m1, mesh);
  EXPECT_TRUE(r1.empty());
  EXPECT_FALSE(std::filesystem::exists(mesh_only + ".missing"));
  EXPECT_THROW(io::read_file(mesh_only + ".missing"), FileNotFoundError);

  ResultContainer results(AnalysisType::TRANSIENT);
  results.add(nodal(mesh, "acouPressure", AnalysisType::TRANSIENT, 4, 1));
  const auto full = path("full.cfs");
  io::write_file(full, mesh, results);
  auto [m2, r2] = io::read_file(full);
  EXPECT_EQ(m2, io::read_mesh(full));
  EXPECT_EQ(r2, io::read_data(full));
}

TEST_F(CfsIoTest, WriterRejectsInconsistentResults) {
  Mesh mesh = unit_cube();
  ResultMeta meta;
  meta.quantity = "acouPressure";
  meta.region = "foo";
  ResultContainer unknown(AnalysisType::TRANSIENT);
  unknown.add(ResultArray(meta, {1, 8, 1}, Eigen::VectorXd::Zero(1), ResultArray::Data::Zero(1, 8)));
  EXPECT_THROW(io::write_file(path("bad1.cfs"), mesh, unknown), ValidationError);

  meta.region = "cube";
  ResultContainer wrong_m(AnalysisType::TRANSIENT);
  wrong_m.add(ResultArray(meta, {1, 7, 1}, Eigen::VectorXd::Zero(1), ResultArray::Data::Zero(1, 7)));
  EXPECT_THROW(io::write_file(path("bad2.cfs"), mesh, wrong_m), ValidationError);
}

TEST_F(CfsIoTest, EmptyContainerWritesNoResultsGroup) {
  const auto p = path("empty.cfs");
  io::write_file(p, unit_cube(), ResultContainer(AnalysisType::TRANSIENT));
  hid_t f = H5Fopen(p.c_str(), H5F_ACC_RDONLY, H5P_DEFAULT);
  EXPECT_GT(H5Lexists(f, "/Mesh", H5P_DEFAULT), 0);
  EXPECT_LE(H5Lexists(f, "/Results", H5P_DEFAULT), 0);
  H5Fclose(f);
}

TEST_F(CfsIoTest, RandomizedRoundTrip) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<Index> nodes(27, 300);
  for (int trial = 0; trial < 12; ++trial) {
    Mesh mesh = fixtures::random_mesh(rng, nodes(rng), 40);
    const auto analysis = trial % 2 == 0 ? AnalysisType::TRANSIENT : AnalysisType::HARMONIC;
    ResultContainer results = fixtures::random_results(rng, mesh, analysis, 3);
    const auto p = path("random" + std::to_string(trial) + ".cfs");
    io::write_file(p, mesh, results);
    auto [m, r] = io::read_file(p);
    EXPECT_EQ(m, mesh);
    EXPECT_EQ(r, results);
    EXPECT_EQ(r.infos(), results.infos());
  }
}

TEST_F(CfsIoTest, WriterIsDeterministic) {
  std::mt19937 rng(9);
  Mesh mesh = fixtures::random_mesh(rng, 60, 20);
  auto results = fixtures::random_results(rng, mesh, AnalysisType::HARMONIC, 4);
  const auto a = path("det_a.cfs");
  const auto b = path("det_b.cfs");
  io::write_file(a, mesh, results);
  io::write_file(b, mesh, results);
  auto [ma, ra] = io::read_file(a);
  auto [mb, rb] = io::read_file(b);
  EXPECT_EQ(ma, mb);
  EXPECT_EQ(ra, rb);
}

TEST_F(CfsIoTest, UnsortedStepsAreStoredAscending) {
  Mesh mesh = unit_cube();
  ResultMeta meta;
  meta.quantity = "acouPressure";
  meta.region = "cube";
  ResultArray::Data data(3, 8);
  for (Index k = 0; k < 3; ++k) data.row(k).setConstant(static_cast<double>(k));
  ResultContainer results(AnalysisType::TRANSIENT);
  results.add(ResultArray(meta, {3, 8, 1}, Eigen::Vector3d(0.3, 0.1, 0.2), data));
  const auto p = path("unsorted.cfs");
  io::write_file(p, mesh, results);
  auto back = io::read_data(p);
  EXPECT_EQ(back.step_values(), Eigen::Vector3d(0.1, 0.2, 0.3));
  EXPECT_EQ(back.arrays()[0].real()(0, 0), 1.0);
  EXPECT_EQ(back.arrays()[0].real()(2, 0), 0.0);
}

TEST_F(CfsIoTest, ReaderTouchesOnlyRequestedMultiStep) {
  std::mt19937 rng(31);
  Mesh mesh = fixtures::random_mesh(rng, 30, 10);
  auto results = fixtures::random_results(rng, mesh, AnalysisType::TRANSIENT, 2);
  const auto p = path("two_ms.cfs");
  io::write_file(p, mesh, results);
  {
    hid_t f = H5Fopen(p.c_str(), H5F_ACC_RDWR, H5P_DEFAULT);
    ASSERT_GE(H5Ocopy(f, "/Results/Mesh/MultiStep_1", f, "/Results/Mesh/MultiStep_2", H5P_DEFAULT,
                      H5P_DEFAULT), 0);
    ASSERT_GE(H5Ocopy(f, "/Results/History/MultiStep_1", f, "/Results/History/MultiStep_2",
                      H5P_DEFAULT, H5P_DEFAULT), 0);
    H5Fclose(f);
  }
  io::CfsReader reader(p);
  EXPECT_EQ(reader.multi_step_ids(), (std::vector<int>{1, 2}));
  auto one = reader.read_multi_step(1);
  EXPECT_EQ(one, results);
  ASSERT_FALSE(reader.access_log().empty());
  for (const auto& entry : reader.access_log()) {
    EXPECT_EQ(entry.find("MultiStep_2"), std::string::npos) << entry;
  }
  auto two = io::read_data(p, 2);
  EXPECT_EQ(two.multi_step_id(), 2);
  EXPECT_EQ(two.arrays().size(), results.arrays().size());
}
