#include <gtest/gtest.h>

#include <random>

#include "sdnmc/bmc.hpp"
#include "sdnmc/bmc_oracle.hpp"
#include "sdnmc/dpll.hpp"
#include "sdnmc/ltl_eval.hpp"
#include "test_support.hpp"

namespace sdnmc {
namespace {

using E = BoolExpr;
using testing::faulty_structure;
using testing::reference_structure;
using testing::sv;

const std::vector<StateVector> kFaultTrace{sv("110000"), sv("101000"), sv("001001")};

E lit(std::uint32_t v, bool positive) { return positive ? E::var(v) : E::negation(E::var(v)); }

TEST(StepVariables, RowMajorLayout) {
  StepVariables vars(6, 2);
  EXPECT_EQ(vars.count(), 18U);
  EXPECT_EQ(vars.var(0, 0), 0U);
  EXPECT_EQ(vars.var(1, 5), 11U);
  EXPECT_EQ(vars.var(2, 3), 15U);
  EXPECT_EQ(vars.name(15), "s2.b[3]");
  EXPECT_THROW(vars.var(3, 0), Error);
}

TEST(EncodeStateLiteral, BitLiteralsMostSignificantFirst) {
  StepVariables vars(6, 2);
  EXPECT_EQ(encode_state_literal(sv("110000"), 0, vars),
            E::conj({lit(5, true), lit(4, true), lit(3, false), lit(2, false), lit(1, false), lit(0, false)}));
  EXPECT_EQ(encode_state_literal(sv("001100"), 2, vars),
            E::conj({lit(17, false), lit(16, false), lit(15, true), lit(14, true), lit(13, false), lit(12, false)}));
  EXPECT_EQ(encode_state_literal(sv("1"), 0, StepVariables(1, 0)), E::conj({E::var(0)}));
  EXPECT_THROW(encode_state_literal(sv("10"), 0, vars), Error);
}

TEST(EncodeInit, Shapes) {
  auto k = reference_structure();
  StepVariables vars(6, 2);
  EXPECT_EQ(encode_init(k, vars), encode_state_literal(sv("110000"), 0, vars));

  auto two = build_kripke({"p"}, {sv("0"), sv("1")}, {sv("0"), sv("1")}, {{sv("0"), sv("1")}, {sv("1"), sv("0")}});
  StepVariables one(1, 0);
  auto init = encode_init(two, one);
  EXPECT_EQ(init.op(), BoolOp::Or);
  EXPECT_EQ(init.children().size(), 2U);
  for (bool v : {false, true}) {
    Assignment a(1);
    a.set(0, v);
    EXPECT_TRUE(evaluate(init, a));
  }
}

TEST(EncodeTransition, DisjunctCounts) {
  StepVariables vars(6, 2);
  EXPECT_EQ(encode_transition_step(reference_structure(), 0, vars).children().size(), 8U);
  EXPECT_EQ(encode_transition_step(faulty_structure(), 0, vars).children().size(), 9U);
  auto self = build_kripke({"p"}, {sv("0")}, {sv("0")}, {{sv("0"), sv("0")}});
  EXPECT_EQ(encode_transition_step(self, 0, StepVariables(1, 1)).children().size(), 1U);
  EXPECT_THROW(encode_transition_step(self, 1, StepVariables(1, 1)), Error);
}

TEST(Unroll, Shapes) {
  auto tf = faulty_structure();
  StepVariables vars(6, 2);
  auto u = unroll(tf, 2, vars);
  ASSERT_EQ(u.op(), BoolOp::And);
  ASSERT_EQ(u.children().size(), 3U);
  EXPECT_EQ(u.children()[0], encode_init(tf, vars));
  EXPECT_EQ(u.children()[1], encode_transition_step(tf, 0, vars));
  EXPECT_EQ(u.children()[2], encode_transition_step(tf, 1, vars));
  EXPECT_EQ(unroll(tf, 0, StepVariables(6, 0)), encode_init(tf, StepVariables(6, 0)));
}

// Models of the depth-1 unrolling are exactly the length-1 paths.
TEST(Unroll, ModelsAreExactlyPaths) {
  auto k = reference_structure();
  StepVariables vars(6, 1);
  auto u = unroll(k, 1, vars);
  std::set<std::vector<StateVector>> models;
  for (std::uint32_t m = 0; m < (1U << vars.count()); ++m) {
    Assignment a(vars.count());
    for (std::uint32_t v = 0; v < vars.count(); ++v) a.set(v, ((m >> v) & 1U) != 0);
    if (evaluate(u, a)) models.insert(decode_trace(a, vars, 1));
  }
  std::set<std::vector<StateVector>> paths;
  for (const auto& p : enumerate_paths(k, 1, false)) paths.insert(p.states);
  EXPECT_EQ(models, paths);
}

TEST(LoopCondition, Shapes) {
  auto tf = faulty_structure();
  StepVariables vars(6, 2);
  auto loops = encode_loop_condition(tf, 2, vars);
  ASSERT_EQ(loops.per_step.size(), 3U);
  EXPECT_EQ(loops.any.op(), BoolOp::Or);
  EXPECT_EQ(loops.any.children().size(), 3U);
  EXPECT_FALSE(evaluate(loops.any, encode_trace(kFaultTrace, vars)));

  auto self = build_kripke({"p"}, {sv("0")}, {sv("0")}, {{sv("0"), sv("0")}});
  for (std::size_t d = 0; d <= 3; ++d) {
    StepVariables v(1, d);
    std::vector<StateVector> only(d + 1, sv("0"));
    EXPECT_TRUE(evaluate(encode_loop_condition(self, d, v).any, encode_trace(only, v)));
  }
}

TEST(TranslateNoLoop, EventuallyIsFlatDisjunction) {
  auto tf = faulty_structure();
  AtomTable atoms(tf);
  StepVariables vars(6, 2);
  auto f = parse_ltl("F !state=001100");
  auto expr = translate_noloop(f, 2, 0, vars, atoms);
  std::vector<E> expected;
  for (std::size_t i = 0; i < 3; ++i) expected.push_back(E::negation(encode_state_literal(sv("001100"), i, vars)));
  EXPECT_EQ(expr, E::disj(expected));
}

TEST(TranslateNoLoop, BaseCases) {
  auto k = reference_structure();
  AtomTable atoms(k);
  StepVariables vars(6, 0);
  EXPECT_EQ(translate_noloop(parse_ltl("X I"), 0, 0, vars, atoms), E::constant(false));
  EXPECT_EQ(translate_noloop(parse_ltl("G true"), 0, 0, vars, atoms), E::constant(false));
  EXPECT_FALSE(found(find_witness(k, parse_ltl("G true"), 3, LoopMode::None)));
  try {
    translate_noloop(parse_ltl("!(I & W)"), 0, 0, vars, atoms);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotInNnf);
  }
}

TEST(TranslateLoop, AgreesWithLassoExamples) {
  auto k = reference_structure();
  AtomTable atoms(k);
  StepVariables vars(6, 1);
  auto a = encode_trace({sv("110000"), sv("010001")}, vars);
  EXPECT_TRUE(evaluate(translate_loop(nnf(parse_ltl("G !FC")), 1, 0, 0, vars, atoms), a));
  EXPECT_FALSE(evaluate(translate_loop(parse_ltl("F state=001100"), 1, 0, 0, vars, atoms), a));
  EXPECT_TRUE(found(find_witness(k, parse_ltl("G true"), 4, LoopMode::Standard)));
}

TEST(FindWitness, ReferenceQuery) {
  auto tf = faulty_structure();
  AtomTable atoms(tf);
  auto f = parse_ltl("F !state=001100");
  auto r = find_witness(tf, f, 2, LoopMode::None, atoms);
  ASSERT_TRUE(found(r));
  const auto& cex = std::get<Counterexample>(r);
  EXPECT_EQ(cex.trace.size(), 3U);
  EXPECT_TRUE(is_path_of(tf, Path{cex.trace, std::nullopt}));

  auto enc = encode_bmc(tf, f, 2, LoopMode::None, atoms);
  EXPECT_TRUE(evaluate(enc.expression, encode_trace(kFaultTrace, enc.vars)));
  EXPECT_TRUE(evaluate(enc.expression, encode_trace({sv("110000"), sv("101000"), sv("001100")}, enc.vars)));
  EXPECT_TRUE(found(oracle_bounded_check(tf, f, 2, LoopMode::None, atoms)));
}

TEST(FindWitness, ReferenceModeShape) {
  auto tf = faulty_structure();
  AtomTable atoms(tf);
  auto enc = encode_bmc(tf, parse_ltl("F !state=001100"), 2, LoopMode::None, atoms);
  const auto& top = enc.expression;
  ASSERT_EQ(top.op(), BoolOp::And);
  ASSERT_EQ(top.children().size(), 4U);
  EXPECT_EQ(top.children()[0], encode_init(tf, enc.vars));
  EXPECT_EQ(top.children()[1], encode_transition_step(tf, 0, enc.vars));
  EXPECT_EQ(top.children()[2], encode_transition_step(tf, 1, enc.vars));
  const auto& prop = top.children()[3];
  ASSERT_EQ(prop.op(), BoolOp::Or);
  ASSERT_EQ(prop.children().size(), 3U);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(prop.children()[i], E::negation(encode_state_literal(sv("001100"), i, enc.vars)));
  }
}

TEST(FindWitness, ReferenceTraceAbsentFromCorrectModel) {
  for (const auto& p : enumerate_paths(reference_structure(), 2, false)) EXPECT_NE(p.states, kFaultTrace);
  EXPECT_FALSE(is_path_of(reference_structure(), Path{kFaultTrace, std::nullopt}));
}

TEST(FindWitness, NoWitnessCases) {
  auto k = reference_structure();
  EXPECT_FALSE(found(find_witness(k, parse_ltl("F state=010010"), 1, LoopMode::Standard)));
  EXPECT_FALSE(found(find_witness(k, parse_ltl("F state=010010"), 1, LoopMode::None)));
  EXPECT_TRUE(found(find_witness(k, parse_ltl("F state=010010"), 4, LoopMode::Standard)));
  for (std::size_t d = 0; d <= 3; ++d) {
    for (auto mode : {LoopMode::None, LoopMode::Standard}) {
      EXPECT_FALSE(found(find_witness(k, parse_ltl("false"), d, mode)));
    }
  }
}

TEST(FindWitness, RefuteNegatesProperty) {
  auto tf = faulty_structure();
  AtomTable atoms(tf);
  auto r = refute(tf, parse_ltl("G state=001100"), 2, LoopMode::None, atoms);
  ASSERT_TRUE(found(r));
  EXPECT_EQ(std::get<Counterexample>(r).formula, "F !state=001100");
}

TEST(DecodeTrace, RoundTrip) {
  StepVariables vars(6, 2);
  EXPECT_EQ(decode_trace(encode_trace(kFaultTrace, vars), vars, 2), kFaultTrace);
  StepVariables zero(6, 0);
  EXPECT_EQ(decode_trace(encode_trace({sv("010001")}, zero), zero, 0).size(), 1U);
  for (const auto& p : enumerate_paths(faulty_structure(), 3, false)) {
    StepVariables v(6, 3);
    EXPECT_EQ(decode_trace(encode_trace(p.states, v), v, 3), p.states);
  }
  try {
    decode_trace(Assignment(3), vars, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnassignedVariable);
  }
}

TEST(Oracle, Limits) {
  std::mt19937 rng(1);
  auto big = testing::random_structure(rng, 17, 5);
  try {
    oracle_bounded_check(big, parse_ltl("true"), 1, LoopMode::None);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
  EXPECT_THROW(oracle_bounded_check(reference_structure(), parse_ltl("true"), 9, LoopMode::None), Error);
}

void expect_valid(const KripkeStructure& k, const LtlFormula& f, const Counterexample& c, const AtomTable& atoms) {
  ASSERT_FALSE(c.trace.empty());
  EXPECT_TRUE(k.init().count(c.trace.front()));
  EXPECT_TRUE(is_path_of(k, Path{c.trace, c.loop_back}));
  if (c.loop_back) {
    EXPECT_TRUE(eval_ltl_lasso(Path{c.trace, c.loop_back}, f, atoms)) << to_string(f);
  } else {
    EXPECT_TRUE(eval_ltl_bounded_noloop(Path{c.trace, std::nullopt}, f, 0, atoms)) << to_string(f);
  }
}

TEST(FindWitness, AgreesWithOracleOnRandomInstances) {
  std::mt19937 rng(2024);
  int witnesses = 0;
  for (int n = 0; n < 300; ++n) {
    auto k = testing::random_structure(rng, 1 + rng() % 12, 3 + rng() % 4);
    AtomTable atoms(k);
    auto f = nnf(testing::random_ltl(rng, k, 4));
    const std::size_t d = rng() % 6;
    for (auto mode : {LoopMode::None, LoopMode::Standard}) {
      auto fast = find_witness(k, f, d, mode, atoms);
      auto slow = oracle_bounded_check(k, f, d, mode, atoms);
      ASSERT_EQ(found(fast), found(slow)) << to_string(f) << " d=" << d << " mode=" << to_string(mode);
      if (found(fast)) {
        ++witnesses;
        expect_valid(k, f, std::get<Counterexample>(fast), atoms);
        EXPECT_EQ(std::get<Counterexample>(fast).trace.size(), d + 1);
      }
    }
  }
  EXPECT_GT(witnesses, 60);
}

TEST(FindWitness, MonotoneInBoundWithLoops) {
  std::mt19937 rng(77);
  for (int n = 0; n < 60; ++n) {
    auto k = testing::random_structure(rng, 2 + rng() % 8, 3);
    auto f = nnf(testing::random_ltl(rng, k, 3));
    bool seen = false;
    for (std::size_t d = 0; d <= 5; ++d) {
      bool now = found(find_witness(k, f, d, LoopMode::Standard));
      if (seen) {
        EXPECT_TRUE(now) << to_string(f) << " d=" << d;
      }
      seen = seen || now;
    }
  }
}

TEST(FindWitness, DeterministicAndCnfOut) {
  auto tf = faulty_structure();
  AtomTable atoms(tf);
  auto f = parse_ltl("F !state=001100");
  CnfFormula a;
  CnfFormula b;
  auto r1 = find_witness(tf, f, 2, LoopMode::Standard, atoms, &a);
  auto r2 = find_witness(tf, f, 2, LoopMode::Standard, atoms, &b);
  EXPECT_EQ(r1, r2);
  EXPECT_EQ(a.clauses(), b.clauses());
  EXPECT_EQ(a.names().at(0), "s0.b[0]");
}

TEST(CounterexampleJson, RoundTrip) {
  Counterexample c{kFaultTrace, std::nullopt, "F !state=001100", 2, LoopMode::None};
  auto j = to_json(c);
  EXPECT_EQ(j["trace"][2], "001001");
  EXPECT_TRUE(j["loop_back"].is_null());
  EXPECT_EQ(j["loop_mode"], "none");
  EXPECT_EQ(counterexample_from_json(j), c);
  c.loop_back = 1;
  c.loop_mode = LoopMode::Standard;
  EXPECT_EQ(counterexample_from_json(nlohmann::json::parse(to_json(c).dump())), c);
}

}  // namespace
}  // namespace sdnmc
