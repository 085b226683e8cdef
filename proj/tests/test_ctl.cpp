#include <gtest/gtest.h>

#include <random>

#include "ctl_oracle.hpp"
#include "sdnmc/ctl.hpp"
#include "sdnmc/presets.hpp"
#include "test_support.hpp"

namespace sdnmc {
namespace {

using C = CtlFormula;
using testing::faulty_structure;
using testing::reference_structure;
using testing::sdn_table;
using testing::sv;

C atom(const char* name) { return C::atom(NamedAtom{name}); }

ErrorCode parse_error(const char* text) {
  try {
    parse_ctl(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

TEST(ParseCtl, ReferenceFormulas) {
  EXPECT_EQ(parse_ctl("AG(C_ip -> AX(FC))"),
            C::unary(CtlOp::AG, C::binary(CtlOp::Implies, atom("C_ip"), C::unary(CtlOp::AX, atom("FC")))));
  EXPECT_EQ(parse_ctl("AG(W_ip & !FC -> AX(C_ip))"),
            C::unary(CtlOp::AG, C::binary(CtlOp::Implies, C::binary(CtlOp::And, atom("W_ip"), C::negation(atom("FC"))),
                                          C::unary(CtlOp::AX, atom("C_ip")))));
  EXPECT_EQ(parse_ctl("EX true"), C::unary(CtlOp::EX, C::truth()));
  EXPECT_EQ(parse_ctl("A[!W_ip W FC]"), C::binary(CtlOp::AW, C::negation(atom("W_ip")), atom("FC")));
  EXPECT_EQ(parse_ctl("E[a U b]"), C::binary(CtlOp::EU, atom("a"), atom("b")));
  EXPECT_EQ(parse_ctl("AG state=110000"), C::unary(CtlOp::AG, C::atom(StateLiteral{sv("110000")})));
}

TEST(ParseCtl, Errors) {
  EXPECT_EQ(parse_error("A p"), ErrorCode::UnpairedQuantifier);
  EXPECT_EQ(parse_error("E p"), ErrorCode::UnpairedQuantifier);
  EXPECT_EQ(parse_error("G p"), ErrorCode::UnpairedQuantifier);
  EXPECT_EQ(parse_error("a U b"), ErrorCode::UnpairedQuantifier);
  EXPECT_EQ(parse_error("E[a W b]"), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("A[a U b"), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error(""), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("AG #"), ErrorCode::UnknownToken);
}

TEST(ParseCtl, RoundTripRandom) {
  std::mt19937 rng(5);
  auto k = testing::random_structure(rng, 6, 4);
  for (int n = 0; n < 500; ++n) {
    auto f = testing::random_ctl(rng, k, 5);
    EXPECT_EQ(parse_ctl(to_string(f)), f) << to_string(f);
  }
}

TEST(ToCtlBasis, OnlyBasisOperators) {
  std::function<bool(const C&)> basic = [&](const C& f) {
    switch (f.op()) {
      case CtlOp::AX: case CtlOp::AG: case CtlOp::AF: case CtlOp::EF:
      case CtlOp::AU: case CtlOp::AW: case CtlOp::Implies: return false;
      default: break;
    }
    for (std::size_t i = 0; i < f.arity(); ++i) {
      if (!basic(f.arg(i))) return false;
    }
    return true;
  };
  std::mt19937 rng(8);
  auto k = testing::random_structure(rng, 5, 3);
  for (int n = 0; n < 100; ++n) EXPECT_TRUE(basic(to_ctl_basis(testing::random_ctl(rng, k, 4))));
}

TEST(CheckCtl, ControllerPropertyOnReferenceModel) {
  auto k = reference_structure();
  auto f = parse_ctl("AG(C_ip -> AX FC)");
  EXPECT_EQ(check_ctl(k, f, sdn_table(k)).states, std::set<StateVector>(k.states().begin(), k.states().end()));

  auto tf = faulty_structure();
  auto bad = check_ctl(tf, f, sdn_table(tf));
  EXPECT_FALSE(bad.contains(sv("101000")));
  EXPECT_FALSE(holds_initially(tf, bad));
}

TEST(CheckCtl, TrivialAndErrors) {
  std::mt19937 rng(2);
  auto k = testing::random_structure(rng, 7, 3);
  EXPECT_EQ(check_ctl(k, parse_ctl("EF true")).states.size(), k.states().size());
  EXPECT_TRUE(check_ctl(k, parse_ctl("EX false")).states.empty());
  try {
    check_ctl(k, parse_ctl("AG nosuch"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundAtom);
  }
}

TEST(CheckCtl, Dualities) {
  std::mt19937 rng(13);
  for (int n = 0; n < 150; ++n) {
    auto k = testing::random_structure(rng, 1 + rng() % 16, 5);
    std::set<StateVector> all(k.states().begin(), k.states().end());
    auto phi = testing::random_ctl(rng, k, 3);
    auto minus = [&](const SatSet& s) {
      std::set<StateVector> out;
      for (const auto& x : all) {
        if (!s.contains(x)) out.insert(x);
      }
      return out;
    };
    EXPECT_EQ(check_ctl(k, C::unary(CtlOp::AG, phi)).states, minus(check_ctl(k, C::unary(CtlOp::EF, C::negation(phi)))));
    EXPECT_EQ(check_ctl(k, C::unary(CtlOp::AF, phi)).states, minus(check_ctl(k, C::unary(CtlOp::EG, C::negation(phi)))));
  }
}

TEST(CheckCtl, AgreesWithPathOracle) {
  std::mt19937 rng(31);
  for (int n = 0; n < 150; ++n) {
    auto k = testing::random_structure(rng, 1 + rng() % 8, 3 + rng() % 2);
    auto f = testing::random_ctl(rng, k, 4);
    testing::CtlOracle oracle(k, AtomTable(k));
    EXPECT_EQ(check_ctl(k, f).states, oracle.sat(f)) << to_string(f);
  }
}

TEST(CtlWitness, FaultyModel) {
  auto tf = faulty_structure();
  auto f = parse_ctl("AG(C_ip -> AX FC)");
  auto p = ctl_witness_ag_violation(tf, f, sv("110000"), sdn_table(tf));
  EXPECT_EQ(p.states, (std::vector<StateVector>{sv("110000"), sv("101000")}));
  EXPECT_FALSE(p.loop_back.has_value());
  EXPECT_TRUE(is_path_of(tf, p));
}

TEST(CtlWitness, Errors) {
  auto k = reference_structure();
  auto code_of = [&](const char* text, const char* s0) {
    try {
      ctl_witness_ag_violation(k, parse_ctl(text), sv(s0), sdn_table(k));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code_of("AG(C_ip -> AX FC)", "110000"), ErrorCode::PropertyHolds);
  EXPECT_EQ(code_of("EF FC", "110000"), ErrorCode::WrongShape);
  EXPECT_EQ(code_of("AG FC", "101000"), ErrorCode::UnknownState);
}

TEST(CtlWitness, InitialStateViolation) {
  auto k = reference_structure();
  auto p = ctl_witness_ag_violation(k, parse_ctl("AG !I"), sv("110000"), sdn_table(k));
  EXPECT_EQ(p.states, std::vector<StateVector>{sv("110000")});
}

TEST(Presets, Contents) {
  auto presets = sdn_property_presets();
  ASSERT_EQ(presets.size(), 4U);
  EXPECT_EQ(find_preset("P2").formula, parse_ctl("AG(C_ip -> AX(FC))"));
  EXPECT_EQ(find_preset("P4").formula, parse_ctl("AG(W_ip & FC -> AX(W_op))"));
  EXPECT_EQ(find_preset("P1").formula, parse_ctl("AG(W_ip -> A[!W_ip W FC])"));
  EXPECT_EQ(find_preset("P3").formula, parse_ctl("AG(W_ip & !FC -> AX(C_ip))"));
  EXPECT_THROW(find_preset("P5"), Error);
}

TEST(Presets, VerdictsOnReferenceModelMatchOracle) {
  auto k = reference_structure();
  testing::CtlOracle oracle(k, sdn_table(k));
  const std::map<std::string, bool> expected{{"P1", false}, {"P2", true}, {"P3", false}, {"P4", true}};
  for (const auto& p : sdn_property_presets()) {
    auto sat = check_ctl(k, p.formula, sdn_table(k));
    EXPECT_EQ(sat.states, oracle.sat(p.formula)) << p.name;
    EXPECT_EQ(holds_initially(k, sat), expected.at(p.name)) << p.name;
  }
}

}  // namespace
}  // namespace sdnmc
