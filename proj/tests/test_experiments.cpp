#include <helmfd/experiments.hpp>

#include <gtest/gtest.h>

#include <filesystem>

using namespace helmfd;

namespace {

ExperimentConfig config(const std::string& id, int a, int b) {
  ExperimentConfig c;
  c.example = id;
  c.J_min = a;
  c.J_max = b;
  return c;
}

std::string csv_of(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  write_csv(rows, os);
  return os.str();
}

} // namespace

TEST(Csv, EmptyRowsGiveHeaderOnly) { EXPECT_EQ(csv_of({}), std::string(kCsvHeader) + "\n"); }

TEST(Csv, FirstRowHasNoOrders) {
  ResultRow r;
  r.J = 4;
  r.h = 1.0 / 16;
  r.ppw = 2.0106;
  r.err_l2 = 0.533;
  r.err_inf = 1.25;
  EXPECT_EQ(csv_of({r}), std::string(kCsvHeader) + "\n4,6.25000e-02,2.01060e+00,5.33000e-01,,1.25000e+00,\n");
}

TEST(Csv, RoundTrip) {
  std::vector<ResultRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].J = 5 + i;
    rows[i].h = std::ldexp(1.0, -rows[i].J);
    rows[i].ppw = 1.2345678 * (i + 1);
    rows[i].err_l2 = 3.14159e-3 / (i + 1);
    rows[i].err_inf = 2.71828e-2 / (i + 1);
    if (i) {
      rows[i].order_l2 = 6.4;
      rows[i].order_inf = 6.25;
    }
  }
  const auto path = std::filesystem::temp_directory_path() / "helmfd_roundtrip.csv";
  emit_csv(rows, path.string());
  std::ifstream f(path);
  const auto back = read_csv(f);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].J, rows[i].J);
    EXPECT_NEAR(back[i].h, rows[i].h, 1e-5 * rows[i].h);
    EXPECT_NEAR(back[i].err_l2, rows[i].err_l2, 1e-5 * rows[i].err_l2);
    EXPECT_EQ(back[i].order_l2.has_value(), rows[i].order_l2.has_value());
  }
  std::filesystem::remove(path);
  EXPECT_THROW(emit_csv(rows, "/nonexistent-dir/x.csv"), IoError);
}

TEST(Catalog, AllExamplesBuild) {
  for (const auto& id : example_ids()) {
    const Problem P = make_problem(config(id, 3, 4));
    EXPECT_FALSE(P.cases.empty()) << id;
    EXPECT_EQ(P.interface(), id.rfind("iface", 0) == 0);
  }
  EXPECT_THROW(make_problem(config("ex9", 3, 4)), ConfigError);
  EXPECT_EQ(make_problem(ExperimentConfig{}).cases.size(), 30u);
}

TEST(Catalog, CircleJumpsMatchTheTwoSidedSolution) {
  const Problem P = make_problem(config("iface3", 7, 7));
  const auto& d = P.cases[0].data;
  const Field up = Field::cos_linear(70, 70);
  const Field um = up + Field::monomial(2, 0, 40) + Field::monomial(0, 2, 40) + Field::monomial(1, 1, 20);
  const auto [g, gG] = jumps_from_solution(up, um, P.op.curve);
  for (Real t : {0.2, 1.7, 4.0}) {
    const auto a = d.jump_g(t, 4), b = g(t, 4);
    const auto c = d.jump_gGamma(t, 3), e = gG(t, 3);
    for (int p = 0; p <= 4; ++p) EXPECT_NEAR(std::abs(a[p] - b[p]), 0, 1e-10) << p;
    for (int p = 0; p <= 3; ++p) EXPECT_NEAR(std::abs(c[p] - e[p]), 0, 1e-10) << p;
  }
}

TEST(Catalog, CurvatureSeries) {
  const auto circle = make_curve("circle");
  const auto k = curvature_param(circle)(0.7, 3);
  EXPECT_NEAR(k[0].real(), 1 / 0.3, 1e-12);
  for (int p = 1; p <= 3; ++p) EXPECT_NEAR(std::abs(k[p]), 0, 1e-10);
  const auto ellipse = make_curve("ellipse");
  auto exact = [](Real t) { return 0.5 / std::pow(std::sin(t) * std::sin(t) + 0.25 * std::cos(t) * std::cos(t), 1.5); };
  const Real t = 0.9, d = 1e-4;
  const auto e = curvature_param(ellipse)(t, 2);
  EXPECT_NEAR(e[0].real(), exact(t), 1e-12);
  EXPECT_NEAR(e[1].real(), (exact(t + d) - exact(t - d)) / (2 * d), 1e-6);
}

TEST(Catalog, MemoryGuardRefuses) {
  EXPECT_THROW(run(config("iface1", 8, 10)), ResourceError);
  EXPECT_THROW(run(config("ex4", 9, 10)), ResourceError);
}

TEST(Runner, DeterministicBytes) {
  auto c = config("ex3", 4, 5);
  c.k = {20};
  c.alpha = 10;
  c.beta = 15;
  EXPECT_EQ(csv_of(run(c)), csv_of(run(c)));
}

TEST(Runner, ExactSolutionConverges) {
  auto c = config("ex2", 4, 6);
  c.k = {20};
  c.alpha = 8;
  c.beta = 12;
  const auto rows = run(c);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_FALSE(rows[0].order_l2);
  EXPECT_GT(*rows[2].order_l2, 5.5);
  for (const auto& r : rows) EXPECT_LE(r.residual, 1e-10);
}

TEST(Runner, SelfConvergenceOnInterfaceProblem) {
  // Ellipse at k = 0; the straddled Dirichlet boundary points are eliminated.
  const auto rows = run(config("iface2", 5, 6));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].J, 5);
  EXPECT_GT(*rows[1].order_l2, 5.5);
}

TEST(Runner, SelfConvergenceMatchesExactOrders) {
  // Same problem measured both ways: orders within 0.5.
  auto c = config("ex3", 5, 6);
  c.k = {20};
  c.alpha = 10;
  c.beta = 15;
  const Problem P = make_problem(c);
  Problem S = P;
  S.self_convergence = true;
  const auto a = run(P), b = run(S);
  EXPECT_NEAR(*a[1].order_l2, *b[1].order_l2, 0.5);
}
