#include <gtest/gtest.h>

#include <random>

#include "sdnmc/dimacs.hpp"
#include "sdnmc/dpll.hpp"
#include "sdnmc/sat.hpp"
#include "test_support.hpp"

namespace sdnmc {
namespace {

using E = BoolExpr;

CnfFormula cnf_of(std::uint32_t vars, std::vector<Clause> clauses) {
  CnfFormula cnf(vars);
  for (auto& c : clauses) cnf.add_clause(std::move(c));
  return cnf;
}

Literal pos(std::uint32_t v) { return {v, true}; }
Literal neg(std::uint32_t v) { return {v, false}; }

TEST(Tseitin, SingleVariable) {
  auto cnf = tseitin(E::var(0));
  ASSERT_EQ(cnf.clauses().size(), 1U);
  EXPECT_EQ(cnf.clauses()[0], Clause{pos(0)});
  EXPECT_EQ(cnf.num_vars(), 1U);
  EXPECT_EQ(cnf.root(), pos(0));
}

TEST(Tseitin, ConjunctionOfTwo) {
  auto cnf = tseitin(E::conj({E::var(0), E::var(1)}));
  EXPECT_EQ(cnf.num_vars(), 3U);
  ASSERT_TRUE(cnf.root().has_value());
  EXPECT_EQ(cnf.root()->var, 2U);
  EXPECT_EQ(cnf.names().at(2), "root");
  // Satisfiable exactly when both inputs hold.
  for (int m = 0; m < 4; ++m) {
    bool x0 = (m & 1) != 0;
    bool x1 = (m & 2) != 0;
    CnfFormula fixed = cnf;
    fixed.add_clause({x0 ? pos(0) : neg(0)});
    fixed.add_clause({x1 ? pos(1) : neg(1)});
    EXPECT_EQ(brute_force_solve(fixed).has_value(), x0 && x1);
  }
}

TEST(Tseitin, SharedSubtermsDefinedOnce) {
  auto shared = E::disj({E::var(0), E::var(1)});
  auto cnf = tseitin(E::conj({shared, shared, E::negation(shared)}));
  EXPECT_EQ(cnf.num_vars(), 4U);  // two inputs, one Or, one And
  EXPECT_FALSE(solve(cnf).has_value());
}

TEST(Tseitin, ConstantsAndDeterminism) {
  EXPECT_FALSE(solve(tseitin(E::constant(false))).has_value());
  EXPECT_TRUE(solve(tseitin(E::constant(true))).has_value());
  EXPECT_TRUE(solve(tseitin(E::conj({}))).has_value());
  EXPECT_FALSE(solve(tseitin(E::disj({}))).has_value());
  std::mt19937 rng(4);
  auto e = testing::random_bool_expr(rng, 8, 6);
  auto a = tseitin(e, 8);
  auto b = tseitin(e, 8);
  EXPECT_EQ(a.clauses(), b.clauses());
  EXPECT_EQ(a.num_vars(), b.num_vars());
}

TEST(Solve, SmallExamples) {
  auto sat = solve(cnf_of(1, {{pos(0)}}));
  ASSERT_TRUE(sat);
  EXPECT_TRUE(sat->at(0));
  EXPECT_FALSE(solve(cnf_of(1, {{pos(0)}, {neg(0)}})).has_value());
  EXPECT_FALSE(solve(cnf_of(2, {{}})).has_value());
  auto empty = solve(CnfFormula(3));
  ASSERT_TRUE(empty);
  EXPECT_TRUE(empty->is_total());
}

TEST(BruteForce, Examples) {
  auto empty = brute_force_solve(CnfFormula(3));
  ASSERT_TRUE(empty);
  for (std::uint32_t v = 0; v < 3; ++v) EXPECT_FALSE(empty->at(v));
  auto m = brute_force_solve(cnf_of(2, {{pos(0), pos(1)}, {neg(0)}}));
  ASSERT_TRUE(m);
  EXPECT_FALSE(m->at(0));
  EXPECT_TRUE(m->at(1));
  try {
    brute_force_solve(CnfFormula(25));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyVariables);
  }
}

TEST(Clauses, Normalisation) {
  CnfFormula cnf(2);
  EXPECT_FALSE(cnf.add_clause({pos(0), neg(0)}));
  EXPECT_TRUE(cnf.add_clause({pos(1), pos(1), pos(0)}));
  ASSERT_EQ(cnf.clauses().size(), 1U);
  EXPECT_EQ(cnf.clauses()[0].size(), 2U);
  cnf.add_clause({pos(6)});
  EXPECT_EQ(cnf.num_vars(), 7U);
}

TEST(Evaluate, Basics) {
  Assignment a(2);
  a.set(0, true);
  a.set(1, false);
  EXPECT_TRUE(evaluate(E::constant(true), Assignment{}));
  EXPECT_TRUE(evaluate(E::disj({E::var(1), E::var(0)}), a));
  EXPECT_FALSE(evaluate(E::conj({E::var(0), E::var(1)}), a));
  try {
    evaluate(E::var(5), a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnassignedVariable);
  }
}

TEST(SolveProperty, MatchesTruthTableAndModelsAreSound) {
  std::mt19937 rng(101);
  int sat_count = 0;
  for (int n = 0; n < 1000; ++n) {
    const std::uint32_t vars = 1 + rng() % 12;
    auto e = testing::random_bool_expr(rng, vars, 6);
    auto cnf = tseitin(e, vars);
    auto model = solve(cnf);
    ASSERT_EQ(model.has_value(), testing::truth_table_satisfiable(e, vars)) << "instance " << n;
    if (model) {
      ++sat_count;
      EXPECT_TRUE(model->is_total());
      EXPECT_TRUE(cnf.satisfied_by(*model));
      EXPECT_TRUE(evaluate(e, testing::restrict_to(*model, vars)));
    }
  }
  EXPECT_GT(sat_count, 100);
  EXPECT_LT(sat_count, 1000);
}

TEST(SolveProperty, UnsatAgreesWithBruteForce) {
  std::mt19937 rng(55);
  int unsat = 0;
  for (int n = 0; n < 400; ++n) {
    const std::uint32_t vars = 3 + rng() % 10;
    CnfFormula cnf(vars);
    const std::size_t clauses = vars * 3 + rng() % (vars * 2);
    for (std::size_t c = 0; c < clauses; ++c) {
      Clause cl;
      for (int l = 0; l < 3; ++l) cl.push_back({static_cast<std::uint32_t>(rng() % vars), rng() % 2 == 0});
      cnf.add_clause(cl);
    }
    auto fast = solve(cnf);
    auto slow = brute_force_solve(cnf);
    ASSERT_EQ(fast.has_value(), slow.has_value());
    if (fast) {
      EXPECT_TRUE(cnf.satisfied_by(*fast));
    }
    if (!fast) ++unsat;
  }
  EXPECT_GT(unsat, 10);
}

TEST(SolveProperty, Deterministic) {
  std::mt19937 rng(9);
  for (int n = 0; n < 50; ++n) {
    auto cnf = tseitin(testing::random_bool_expr(rng, 10, 6), 10);
    EXPECT_EQ(solve(cnf), solve(cnf));
  }
}

TEST(SolveProperty, LowestIndexTrueFirst) {
  // Unconstrained variables end up true; the first model in true-first order is found.
  auto m = solve(cnf_of(3, {{neg(0), neg(1)}}));
  ASSERT_TRUE(m);
  EXPECT_TRUE(m->at(0));
  EXPECT_FALSE(m->at(1));
  EXPECT_TRUE(m->at(2));
}

TEST(Dimacs, RoundTrip) {
  CnfFormula cnf(3);
  cnf.add_clause({pos(0), neg(2)});
  cnf.add_clause({neg(1)});
  cnf.set_name(0, "s0.b[0]");
  auto text = write_dimacs(cnf);
  EXPECT_NE(text.find("p cnf 3 2\n"), std::string::npos);
  EXPECT_NE(text.find("c 1 s0.b[0]\n"), std::string::npos);
  EXPECT_NE(text.find("1 -3 0\n"), std::string::npos);
  auto back = read_dimacs(text);
  EXPECT_EQ(back.num_vars(), 3U);
  EXPECT_EQ(back.clauses(), cnf.clauses());
  EXPECT_THROW(read_dimacs("1 2 0\n"), Error);
}

TEST(Dimacs, ModelLines) {
  auto a = read_dimacs_model("s SATISFIABLE\nv 1 -2 3\nv -4 0\n");
  EXPECT_TRUE(a.at(0));
  EXPECT_FALSE(a.at(1));
  EXPECT_TRUE(a.at(2));
  EXPECT_FALSE(a.at(3));
}

}  // namespace
}  // namespace sdnmc
