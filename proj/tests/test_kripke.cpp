#include <gtest/gtest.h>

#include <random>

#include "sdnmc/kripke.hpp"
#include "sdnmc/kripke_io.hpp"
#include "test_support.hpp"

namespace sdnmc {
namespace {

using testing::faulty_structure;
using testing::reference_structure;
using testing::reference_transitions;
using testing::sv;

std::size_t count_substr(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

TEST(StateVector, BitOrderingIsMostSignificantFirst) {
  auto s = sv("110000");
  EXPECT_EQ(s.width(), 6U);
  EXPECT_TRUE(s.bit(5));
  EXPECT_TRUE(s.bit(4));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_FALSE(s.bit(i));
  EXPECT_EQ(s.to_string(), "110000");
  EXPECT_NE(sv("0"), sv("00"));
  EXPECT_THROW(StateVector::parse("10x"), Error);
  EXPECT_THROW(StateVector(0, 0), Error);
}

TEST(BuildKripke, ReferenceStructure) {
  auto k = reference_structure();
  EXPECT_EQ(k.states().size(), 6U);
  EXPECT_EQ(k.transitions().size(), 8U);
  EXPECT_EQ(k.init(), std::set<StateVector>{sv("110000")});
}

TEST(BuildKripke, SingleSelfLoop) {
  auto k = build_kripke({"p"}, {sv("0")}, {sv("0")}, {{sv("0"), sv("0")}});
  EXPECT_EQ(k.width(), 1U);
  EXPECT_EQ(successors(k, sv("0")), std::set<StateVector>{sv("0")});
}

TEST(BuildKripke, RemovingUniqueSuccessorIsNonTotal) {
  auto trans = reference_transitions();
  std::erase(trans, Transition{sv("010001"), sv("110000")});
  try {
    build_kripke(sdn_atoms(), testing::reference_states(), {sv("110000")}, trans);
    FAIL() << "expected NonTotalState";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonTotalState);
    EXPECT_NE(std::string(e.what()).find("010001"), std::string::npos);
  }
}

TEST(BuildKripke, Errors) {
  auto expect_code = [](ErrorCode code, auto&& fn) {
    try {
      fn();
      ADD_FAILURE() << "no error raised";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << e.what();
    }
  };
  expect_code(ErrorCode::EmptyInit, [] { build_kripke({"p"}, {sv("0")}, {}, {{sv("0"), sv("0")}}); });
  expect_code(ErrorCode::WidthMismatch, [] { build_kripke({"p"}, {sv("01")}, {sv("01")}, {}); });
  expect_code(ErrorCode::DanglingTransitionEndpoint,
              [] { build_kripke({"p"}, {sv("0")}, {sv("0")}, {{sv("0"), sv("0")}, {sv("0"), sv("1")}}); });
  expect_code(ErrorCode::DuplicateAtom, [] { build_kripke({"p", "p"}, {sv("00")}, {sv("00")}, {}); });
  expect_code(ErrorCode::UnknownState, [] { build_kripke({"p"}, {sv("0")}, {sv("1")}, {{sv("0"), sv("0")}}); });
}

TEST(Successors, ReferenceExamples) {
  auto k = reference_structure();
  EXPECT_EQ(successors(k, sv("001001")), (std::set<StateVector>{sv("010001"), sv("010010")}));
  EXPECT_EQ(successors(k, sv("110000")), (std::set<StateVector>{sv("101000"), sv("010001")}));
  try {
    successors(k, sv("111111"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownState);
  }
}

TEST(WithAddedTransition, FaultyTransition) {
  auto k = reference_structure();
  auto tf = faulty_structure();
  EXPECT_EQ(tf.transitions().size(), 9U);
  EXPECT_EQ(k.transitions().size(), 8U);
  EXPECT_EQ(successors(tf, sv("101000")), (std::set<StateVector>{sv("001100"), sv("001001")}));
  EXPECT_EQ(with_added_transition(k, sv("110000"), sv("101000")), k);
  EXPECT_EQ(tf.states(), k.states());
  EXPECT_EQ(tf.init(), k.init());
  EXPECT_EQ(tf.atoms(), k.atoms());
}

TEST(EnumeratePaths, BoundTwo) {
  auto collect = [](const KripkeStructure& k) {
    std::set<std::vector<StateVector>> out;
    for (const auto& p : enumerate_paths(k, 2, false)) out.insert(p.states);
    return out;
  };
  std::set<std::vector<StateVector>> expected{
      {sv("110000"), sv("101000"), sv("001100")},
      {sv("110000"), sv("010001"), sv("110000")},
  };
  EXPECT_EQ(collect(reference_structure()), expected);
  expected.insert({sv("110000"), sv("101000"), sv("001001")});
  EXPECT_EQ(collect(faulty_structure()), expected);
}

TEST(EnumeratePaths, BoundZeroAndLoopInfo) {
  auto k = reference_structure();
  auto zero = enumerate_paths(k, 0, false);
  ASSERT_EQ(zero.size(), 1U);
  EXPECT_EQ(zero[0].states, std::vector<StateVector>{sv("110000")});

  for (const auto& p : enumerate_paths(k, 2, true)) {
    if (p.states.back() == sv("110000")) {
      EXPECT_EQ(p.loop_backs, (std::vector<std::size_t>{1}));  // 110000 -> 010001 at index 1
    } else {
      EXPECT_TRUE(p.loop_backs.empty());
    }
  }
}

// Number of walks of length d from init equals the init-row sum of A^d.
TEST(EnumeratePaths, CountMatchesAdjacencyMatrixPower) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    auto k = testing::random_structure(rng, 2 + rng() % 15, 4);
    const std::size_t n = k.states().size();
    std::vector<std::vector<std::uint64_t>> adj(n, std::vector<std::uint64_t>(n, 0));
    for (const auto& [a, b] : k.transitions()) adj[*k.index_of(a)][*k.index_of(b)] = 1;
    for (std::size_t d = 0; d <= 4; ++d) {
      std::vector<std::uint64_t> row(n, 0);
      for (const auto& s : k.init()) row[*k.index_of(s)] = 1;
      for (std::size_t step = 0; step < d; ++step) {
        std::vector<std::uint64_t> next(n, 0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) next[j] += row[i] * adj[i][j];
        row = next;
      }
      std::uint64_t walks = 0;
      for (auto w : row) walks += w;
      EXPECT_EQ(enumerate_paths(k, d, false).size(), walks);
    }
  }
}

TEST(Reachable, Examples) {
  EXPECT_EQ(reachable(reference_structure()).size(), 6U);
  auto k = build_kripke({"p"}, {sv("0"), sv("1")}, {sv("0")}, {{sv("0"), sv("0")}, {sv("1"), sv("0")}});
  EXPECT_EQ(reachable(k), std::set<StateVector>{sv("0")});
}

TEST(Labeling, DerivedFromBits) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto k = testing::random_structure(rng, 6, 5);
    for (const auto& s : k.states()) {
      auto label = k.label(s);
      for (std::size_t i = 0; i < k.width(); ++i) {
        bool listed = std::find(label.begin(), label.end(), k.atom_of_bit(i)) != label.end();
        EXPECT_EQ(listed, s.bit(i));
      }
    }
  }
  EXPECT_EQ(reference_structure().label(sv("110000")), (std::vector<std::string>{"I", "W"}));
}

TEST(ExportDot, CountsAndDeterminism) {
  auto dot = export_dot(reference_structure());
  EXPECT_EQ(count_substr(dot, "[label="), 6U);
  EXPECT_EQ(count_substr(dot, " -> "), 8U);
  EXPECT_EQ(count_substr(dot, "doublecircle"), 1U);
  EXPECT_EQ(count_substr(export_dot(faulty_structure()), " -> "), 9U);
  EXPECT_EQ(dot, export_dot(reference_structure()));

  auto single = export_dot(build_kripke({"p"}, {sv("0")}, {sv("0")}, {{sv("0"), sv("0")}}));
  EXPECT_EQ(count_substr(single, "[label="), 1U);
  EXPECT_EQ(count_substr(single, " -> "), 1U);
}

TEST(KripkeText, ParseAndSerialize) {
  auto k = reference_structure();
  auto text = serialize_kripke(k);
  EXPECT_EQ(parse_kripke_text(text), k);
  EXPECT_EQ(parse_kripke_text("# comment\natoms p\nstate 0  # trailing\ninit 0\ntrans 0 0\n").states().size(), 1U);
}

TEST(KripkeText, Rejections) {
  auto code_of = [](const std::string& text) {
    try {
      parse_kripke_text(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code_of("atoms p\nstate 0\nstate 0\ninit 0\ntrans 0 0\n"), ErrorCode::DuplicateState);
  EXPECT_EQ(code_of("atoms p q\nstate 0\n"), ErrorCode::WidthMismatch);
  EXPECT_EQ(code_of("atoms p\nbogus 0\n"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("state 0\n"), ErrorCode::ParseError);
}

TEST(KripkeText, CommittedFixturesMatch) {
  EXPECT_EQ(load_kripke_file(SDNMC_FIXTURE_DIR "/eq8.kripke"), reference_structure());
  EXPECT_EQ(load_kripke_file(SDNMC_FIXTURE_DIR "/tf.kripke"), faulty_structure());
}

}  // namespace
}  // namespace sdnmc
