#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "hazsearch/errors.hpp"
#include "hazsearch/workcell.hpp"
#include "hazsearch/workflow.hpp"
#include "support/expect.hpp"

using namespace hazsearch;
using testsupport::contains;
using testsupport::error_message;

namespace {

WorkflowFsm reference_fsm() { return reference_workcell_config().fsm; }

} // namespace

TEST_CASE("workflow: the reference task model accepts and rejects correctly") {
    const WorkflowFsm fsm = reference_fsm();

    CHECK(fsm.accepts("tpwtdw"));
    CHECK(fsm.first_rejection("tpwtdw") == std::nullopt);

    // 'd' right after 't': nothing is held yet, so the second symbol fails
    CHECK_FALSE(fsm.accepts("tdpwtd"));
    REQUIRE(fsm.first_rejection("tdpwtd").has_value());
    CHECK(*fsm.first_rejection("tdpwtd") == 1);  // symbol 2 when counted from 1

    CHECK(fsm.accepts("wwwwww"));  // waiting forever is legal, if pointless
    CHECK(fsm.accepts("tptdww"));
    CHECK(fsm.accepts("wtptdw"));
    CHECK_FALSE(fsm.accepts("pppppp"));  // no piece at the robot station yet
    CHECK_FALSE(fsm.accepts("dwwwww"));  // cannot put down empty-handed

    const std::string msg = error_message<ConfigError>([&] { (void)fsm.accepts("tpxtdw"); });
    CHECK(contains(msg, "x"));
    CHECK(contains(msg, "2"));  // position of the bad symbol, counted from 0
}

TEST_CASE("workflow: feasible-set sizes for the reference model") {
    const WorkflowFsm fsm = reference_fsm();
    const std::vector<std::uint64_t> expected = {2, 5, 13, 35, 96, 266, 741, 2070};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const int m1 = static_cast<int>(i) + 1;
        const CandidateSet set = generate_feasible(fsm, m1);
        CAPTURE(m1);
        CHECK(set.size() == expected[i]);
        std::uint64_t raw = 1;
        for (int k = 0; k < m1; ++k) raw *= 4;
        CHECK(set.enumerated == raw);
    }
}

TEST_CASE("workflow: enumeration details") {
    const WorkflowFsm fsm = reference_fsm();

    SUBCASE("single actions: only transfer and wait are possible at the start") {
        const CandidateSet set = generate_feasible(fsm, 1);
        REQUIRE(set.size() == 2);
        std::set<std::string> got;
        for (const auto& e : set.entries) got.insert(e.sequence);
        CHECK(got == std::set<std::string>{"t", "w"});
    }

    SUBCASE("every feasible sequence is unique and actually feasible") {
        const CandidateSet set = generate_feasible(fsm, 6);
        std::set<std::string> seen;
        for (const auto& e : set.entries) {
            CHECK(fsm.accepts(e.sequence));
            CHECK(seen.insert(e.sequence).second);
        }
        CHECK(seen.size() == 266);
    }

    SUBCASE("fresh entries carry no search state") {
        const CandidateSet set = generate_feasible(fsm, 3);
        for (const auto& e : set.entries) {
            CHECK_FALSE(e.distance.has_value());
            CHECK_FALSE(e.risk_estimate.has_value());
            CHECK(e.status == CandidateStatus::pending);
            CHECK(e.evaluations == 0);
        }
    }

    SUBCASE("the enumeration cap refuses oversized spaces before any work") {
        const std::string msg = error_message<ConfigError>(
            [&] { (void)generate_feasible(fsm, 13, 10'000'000); });
        CHECK(contains(msg, "cap"));
        // a cap exactly equal to the raw space is allowed
        const CandidateSet ok = generate_feasible(fsm, 9, 262'144);
        CHECK(ok.enumerated == 262'144);
        CHECK(ok.size() > 2070);  // grows monotonically with length
    }
}

TEST_CASE("workflow: an unconstrained model admits the whole space") {
    std::vector<std::tuple<std::string, char, std::string>> edges;
    for (char c : std::string("tpwd")) edges.emplace_back("S", c, "S");
    const WorkflowFsm fsm = WorkflowFsm::from_transitions("tpwd", {"S"}, "S", edges);
    const CandidateSet set = generate_feasible(fsm, 3);
    CHECK(set.size() == 64);
    CHECK(set.enumerated == 64);
}

TEST_CASE("workflow: transition-table construction errors") {
    const std::vector<std::string> states = {"A", "B"};

    SUBCASE("unknown source state") {
        const std::string msg = error_message<ConfigError>([&] {
            (void)WorkflowFsm::from_transitions("tp", states, "A", {{"C", 't', "A"}});
        });
        CHECK(contains(msg, "transitions[0]"));
        CHECK(contains(msg, "state"));
    }
    SUBCASE("unknown action, with its entry index") {
        const std::string msg = error_message<ConfigError>([&] {
            (void)WorkflowFsm::from_transitions(
                "tp", states, "A",
                {{"A", 't', "A"}, {"A", 'p', "B"}, {"B", 't', "A"}, {"B", 'q', "B"}});
        });
        CHECK(contains(msg, "transitions[3]"));
        CHECK(contains(msg, "action"));
    }
    SUBCASE("duplicate edge") {
        const std::string msg = error_message<ConfigError>([&] {
            (void)WorkflowFsm::from_transitions("tp", states, "A",
                                                {{"A", 't', "A"}, {"A", 't', "B"}});
        });
        CHECK(contains(msg, "transitions[1]"));
        CHECK(contains(msg, "duplicate"));
    }
    SUBCASE("unknown initial state") {
        const std::string msg = error_message<ConfigError>([&] {
            (void)WorkflowFsm::from_transitions("tp", states, "Z", {{"A", 't', "A"}});
        });
        CHECK(contains(msg, "initial"));
    }
    SUBCASE("duplicate alphabet symbol") {
        CHECK_THROWS_AS((void)WorkflowFsm::from_transitions("tt", states, "A",
                                                            {{"A", 't', "A"}}),
                        ConfigError);
    }
    SUBCASE("duplicate state name") {
        CHECK_THROWS_AS((void)WorkflowFsm::from_transitions("tp", {"A", "A"}, "A",
                                                            {{"A", 't', "A"}}),
                        ConfigError);
    }
}
