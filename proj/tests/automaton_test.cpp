#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace ltlrec;
using ltlrec::testing::fig2;

namespace {

const char* kToy1 = R"(
states 3
initial 0
accepting 2
obs 2
trans 0 1 1
trans 1 2 2
trans 2 1 0
)";

}  // namespace

TEST(ParseAutomaton, BundledTaskAutomaton) {
  const BuchiAutomaton a = fig2();
  EXPECT_EQ(a.n_states(), 7);
  EXPECT_EQ(a.n_obs(), 3);
  EXPECT_EQ(a.initial(), (std::set<StateId>{0}));
  EXPECT_EQ(a.accepting(), (std::set<StateId>{3, 6}));
  EXPECT_EQ(a.successors(5, 1), (std::set<StateId>{3, 6}));
}

TEST(ParseAutomaton, SingleStateSelfLoop) {
  const auto a = parse_automaton("states 1\ninitial 0\naccepting 0\nobs 1\ntrans 0 1 0\n");
  EXPECT_EQ(a.n_states(), 1);
  EXPECT_EQ(prune_infeasible(a), a);
}

TEST(ParseAutomaton, DanglingStateIsValidationError) {
  try {
    parse_automaton("states 7\ninitial 0\naccepting 1\nobs 1\ntrans 0 1 9\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.problems().size(), 1u);
    EXPECT_NE(e.problems()[0].find("dangling state id 9"), std::string::npos);
  }
}

TEST(ParseAutomaton, DanglingObservationAndEmptySetsAggregate) {
  try {
    BuchiAutomaton(2, 1, {}, {}, {{{0, 3}, {1}}});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.problems().size(), 3u);
  }
}

TEST(ParseAutomaton, SyntaxErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_automaton(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("states 2\ninitial 0\naccepting 1\nobs 1\ntrans 0 1 1\ntrans 0 1 0\n"), 6);
  EXPECT_EQ(line_of("states 2\nbogus 1\n"), 2);
  EXPECT_EQ(line_of("# comment\nstates two\n"), 2);
  EXPECT_EQ(line_of("states 2\ninitial 0\nobs 1\n"), 3);  // missing accepting, reported at EOF
  EXPECT_EQ(line_of("states 2\nstates 3\n"), 2);
}

TEST(ParseAutomaton, CommentsAndBlankLinesIgnored) {
  const auto a = parse_automaton("# header\n\nstates 1 # trailing\ninitial 0\naccepting 0\nobs 1\ntrans 0 1 0\n");
  EXPECT_EQ(a.n_states(), 1);
}

TEST(ParseAutomaton, SerializeRoundTrip) {
  const BuchiAutomaton a = fig2();
  EXPECT_EQ(parse_automaton(serialize_automaton(a)), a);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const auto r = ltlrec::testing::random_automaton(rng);
    EXPECT_EQ(parse_automaton(serialize_automaton(r)), r);
  }
}

TEST(EnabledObservations, Examples) {
  EXPECT_TRUE(enabled_observations(fig2(), 5).count(1));
  EXPECT_EQ(enabled_observations(parse_automaton(kToy1), 0), (std::set<ObsId>{1}));
  const auto sink = parse_automaton("states 2\ninitial 0\naccepting 0\nobs 1\ntrans 0 1 0\n");
  EXPECT_TRUE(enabled_observations(sink, 1).empty());
}

TEST(Prune, TaskAutomatonUnchanged) { EXPECT_EQ(prune_infeasible(fig2()), fig2()); }

TEST(Prune, Toy1Unchanged) {
  const auto a = parse_automaton(kToy1);
  EXPECT_EQ(prune_infeasible(a), a);
}

TEST(Prune, ChainWithoutAcceptingCycleIsInfeasible) {
  const auto chain = parse_automaton("states 3\ninitial 0\naccepting 2\nobs 1\ntrans 0 1 1\ntrans 1 1 2\n");
  try {
    prune_infeasible(chain);
    FAIL() << "expected Infeasible";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
  }
}

TEST(Prune, DropsDeadBranchesAndKeepsIds) {
  // 3 is a dead end, 4 is unreachable from anything useful.
  const auto a = parse_automaton(
      "states 5\ninitial 0\naccepting 2\nobs 2\ntrans 0 1 1 3\ntrans 1 1 2\ntrans 2 2 0\ntrans 4 1 4\n");
  const auto p = prune_infeasible(a);
  EXPECT_EQ(p.states(), (std::set<StateId>{0, 1, 2}));
  EXPECT_EQ(p.successors(0, 1), (std::set<StateId>{1}));
  EXPECT_EQ(p.id_bound(), 5);
}

TEST(Prune, IdempotentAndEveryStateHasAnObservation) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const auto p = ltlrec::testing::random_pruned_automaton(rng);
    EXPECT_EQ(prune_infeasible(p), p);
    for (StateId s : p.states()) EXPECT_FALSE(enabled_observations(p, s).empty());
  }
}
