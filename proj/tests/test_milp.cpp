#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "lasercon/error.hpp"
#include "lasercon/lp.hpp"
#include "lasercon/milp.hpp"
#include "support.hpp"

using namespace lasercon;
using namespace lasercon::milp;

TEST(Lp, SmallMaximization) {
  // max 3x + 2y, x + y <= 4, x + 3y <= 6, 0 <= x <= 3
  LpProblem p;
  p.c = {3.0, 2.0};
  p.lo = {0.0, 0.0};
  p.hi = {3.0, kInf};
  p.rows.push_back({{{0, 1.0}, {1, 1.0}}, Sense::LessEqual, 4.0});
  p.rows.push_back({{{0, 1.0}, {1, 3.0}}, Sense::LessEqual, 6.0});
  const auto r = solve_lp(p);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, 11.0, 1e-9);
  EXPECT_NEAR(r.x[0], 3.0, 1e-9);
  EXPECT_NEAR(r.x[1], 1.0, 1e-9);
}

TEST(Lp, MixedSensesNeedPhaseOne) {
  // max -x - y, x + y >= 1.5, x - y <= -0.25, 0 <= x, y <= 1
  LpProblem p;
  p.c = {-1.0, -1.0};
  p.lo = {0.0, 0.0};
  p.hi = {1.0, 1.0};
  p.rows.push_back({{{0, 1.0}, {1, 1.0}}, Sense::GreaterEqual, 1.5});
  p.rows.push_back({{{0, 1.0}, {1, -1.0}}, Sense::LessEqual, -0.25});
  const auto r = solve_lp(p);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, -1.5, 1e-9);
  EXPECT_NEAR(r.x[0] + r.x[1], 1.5, 1e-9);
  EXPECT_LE(r.x[0] - r.x[1], -0.25 + 1e-9);
}

TEST(Lp, InfeasibleAndUnbounded) {
  LpProblem p;
  p.c = {1.0};
  p.lo = {0.0};
  p.hi = {1.0};
  p.rows.push_back({{{0, 1.0}}, Sense::GreaterEqual, 2.0});
  EXPECT_EQ(solve_lp(p).status, LpStatus::Infeasible);
  LpProblem q;
  q.c = {1.0};
  q.lo = {0.0};
  q.hi = {kInf};
  EXPECT_EQ(solve_lp(q).status, LpStatus::Unbounded);
}

TEST(Exact, Trivial) {
  MilpModel m;
  const auto x1 = m.add_variable("x1", 1.0);
  const auto x2 = m.add_variable("x2", 2.0);
  m.add_constraint("c", {{x1, 1.0}, {x2, 1.0}}, Sense::LessEqual, 1.0);
  const auto sol = solve_exact(m);
  EXPECT_EQ(sol.status, Status::Optimal);
  EXPECT_DOUBLE_EQ(sol.objective_value, 2.0);
  EXPECT_EQ(sol.assignment[x2], 1);
  EXPECT_EQ(sol.assignment[x1], 0);
  EXPECT_EQ(sol.gap, 0.0);
}

TEST(Exact, Infeasible) {
  MilpModel m;
  const auto x = m.add_variable("x1", 1.0);
  m.add_constraint("lo", {{x, 1.0}}, Sense::GreaterEqual, 1.0);
  m.add_constraint("hi", {{x, 1.0}}, Sense::LessEqual, 0.0);
  EXPECT_EQ(solve_exact(m).status, Status::Infeasible);
}

TEST(Exact, RandomModelsMatchEnumeration) {
  std::mt19937_64 gen(2024);
  for (int i = 0; i < 40; ++i) {
    const auto m = oracle::random_binary_model(gen, 10, 5);
    const auto oracle = oracle::enumerate_model(m);
    const auto sol = solve_exact(m);
    if (!oracle.feasible) {
      EXPECT_EQ(sol.status, Status::Infeasible);
      continue;
    }
    ASSERT_EQ(sol.status, Status::Optimal) << i;
    EXPECT_NEAR(sol.objective_value, oracle.best, 1e-9) << i;
    EXPECT_TRUE(m.satisfies(sol.assignment));
    EXPECT_EQ(sol.gap, 0.0);
  }
}

TEST(Exact, CombinatorialBoundAgreesWithLp) {
  std::mt19937_64 gen(99);
  for (int i = 0; i < 10; ++i) {
    const auto inst = oracle::random_mclp(gen, 8, 3, 3, 2, false);
    const auto model = formulations::build_mclp_model(inst).model;
    Limits lp;
    Limits comb;
    comb.bound = BoundMode::Combinatorial;
    EXPECT_NEAR(solve_exact(model, lp).objective_value, solve_exact(model, comb).objective_value, 1e-9);
  }
}

TEST(Exact, NodeCapCarriesIncumbent) {
  std::mt19937_64 gen(5);
  const auto inst = oracle::random_mclp(gen, 20, 4, 5, 3, false);
  const auto model = formulations::build_mclp_model(inst).model;
  Limits limits;
  limits.node_cap = 1;
  try {
    const auto sol = solve_exact(model, limits);
    EXPECT_EQ(sol.status, Status::Optimal);
  } catch (const LimitsExceeded& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LimitsExceeded);
    EXPECT_GE(e.incumbent().bound, e.incumbent().objective_value);
  }
}

TEST(Heuristic, CoverageGuaranteeAndStatus) {
  std::mt19937_64 gen(8);
  for (int i = 0; i < 10; ++i) {
    const auto inst = oracle::random_mclp(gen, 12, 3, 4, 3, true);
    const auto model = formulations::build_mclp_model(inst).model;
    const auto exact = solve_exact(model);
    const auto heur = solve_heuristic(model, StructureHint::CoverageCardinality);
    EXPECT_EQ(heur.status, Status::Feasible);
    EXPECT_TRUE(model.satisfies(heur.assignment));
    EXPECT_GE(heur.objective_value + 1e-9, (1.0 - 1.0 / std::exp(1.0)) * exact.objective_value);
    EXPECT_GE(heur.bound + 1e-9, exact.objective_value);
  }
}

TEST(Heuristic, SelectAllEqualsExact) {
  std::mt19937_64 gen(9);
  auto inst = oracle::random_mclp(gen, 4, 3, 3, 4, false);
  const auto model = formulations::build_mclp_model(inst).model;
  EXPECT_NEAR(solve_heuristic(model, StructureHint::CoverageCardinality).objective_value,
              solve_exact(model).objective_value, 1e-9);
}

TEST(Heuristic, GenericDiveIsFeasible) {
  std::mt19937_64 gen(10);
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    const auto m = oracle::random_binary_model(gen, 10, 4);
    const auto sol = solve_heuristic(m, StructureHint::Generic);
    if (sol.assignment.empty()) continue;
    EXPECT_TRUE(m.satisfies(sol.assignment));
    EXPECT_LE(sol.objective_value, oracle::enumerate_model(m).best + 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(Heuristic, CoverageHintOnGenericModelThrows) {
  MilpModel m;
  m.add_variable("x", 1.0);
  m.add_constraint("c", {{0, 2.0}}, Sense::LessEqual, 1.0);
  try {
    solve_heuristic(m, StructureHint::CoverageCardinality);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StructureMismatch);
  }
}

TEST(Model, Validation) {
  MilpModel m;
  m.add_variable("x", 1.0);
  m.add_constraint("c", {{3, 1.0}}, Sense::LessEqual, 1.0);
  EXPECT_THROW(m.validate(), Error);
}

TEST(Mps, Sections) {
  MilpModel m;
  m.add_variable("x1", 1.0);
  m.add_variable("x2", 2.0);
  m.add_constraint("c1", {{0, 1.0}, {1, 1.0}}, Sense::LessEqual, 1.0);
  const auto text = to_mps(m);
  for (const char* key : {"NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA", "'INTORG'", "'INTEND'"}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST(Mps, RoundTrip) {
  std::mt19937_64 gen(12);
  for (int i = 0; i < 10; ++i) {
    auto m = oracle::random_binary_model(gen, 8, 4);
    m.metadata["objective_scale"] = "1000000";
    EXPECT_EQ(parse_mps(to_mps(m)), m);
  }
}

TEST(Mps, EmptyModel) {
  MilpModel m;
  const auto text = to_mps(m);
  EXPECT_NE(text.find("ENDATA"), std::string::npos);
  EXPECT_EQ(parse_mps(text), m);
}

TEST(Mps, FileRoundTripAndSolution) {
  MilpModel m;
  m.add_variable("alpha", 1.0);
  m.add_variable("beta", 2.0);
  m.add_constraint("c", {{0, 1.0}, {1, 1.0}}, Sense::LessEqual, 1.0);
  const auto dir = std::filesystem::temp_directory_path() / "lasercon_mps_test";
  std::filesystem::create_directories(dir);
  export_mps(m, dir / "m.mps");
  EXPECT_EQ(import_mps(dir / "m.mps"), m);
  {
    std::ofstream sol(dir / "m.sol");
    sol << "# solution\nbeta 1\n";
  }
  EXPECT_EQ(import_solution(m, dir / "m.sol"), (std::vector<std::uint8_t>{0, 1}));
  std::filesystem::remove_all(dir);
}

TEST(Mps, MalformedRejected) {
  EXPECT_THROW(parse_mps("NAME x\nROWS\n Q  bad\nENDATA\n"), Error);
}
