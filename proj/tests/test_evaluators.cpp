#include "casched/evaluators.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace casched;
using casched::testing::instance_x;
using casched::testing::simple_bid;

TEST_CASE("assess picks the tightest highest-price achievable option") {
    const Instance inst = instance_x();

    SUBCASE("user 0 at arrival") {
        const auto a = assess(inst, inst.bids[0], 1, 0);
        REQUIRE(a.has_value());
        CHECK(a->user_id == 0);
        CHECK(a->active_option == 0);  // (2,10) still achievable at t=1
        CHECK(a->unit_time_value == Rational(10, 1));  // 10 / (2 - 1)
        CHECK(a->per_resource_density == std::vector<Rational>{Rational(1, 60)});
        CHECK(a->weighted_density == Rational(1, 60));
        CHECK(a->total_demand == 600);
    }
    SUBCASE("user 1 at arrival") {
        const auto a = assess(inst, inst.bids[1], 1, 0);
        REQUIRE(a.has_value());
        CHECK(a->active_option == 0);  // (3,8)
        CHECK(a->unit_time_value == Rational(8, 2));
        CHECK(a->weighted_density == Rational(1, 150));
    }
    SUBCASE("user 1 at slot 3 with no progress") {
        // needs 2 slots from t=3 -> completes at 4 > 3, option (3,8) is gone
        const auto a = assess(inst, inst.bids[1], 3, 0);
        REQUIRE(a.has_value());
        CHECK(a->active_option == 1);  // (5,5)
        CHECK(a->unit_time_value == Rational(5, 4));
    }
    SUBCASE("progress extends achievability") {
        // one slot done: completing at t=3 itself keeps (3,8)
        const auto a = assess(inst, inst.bids[1], 3, 1);
        REQUIRE(a.has_value());
        CHECK(a->active_option == 0);
    }
    SUBCASE("no option reachable") {
        CHECK_FALSE(assess(inst, inst.bids[0], 4, 0).has_value());
        CHECK_FALSE(assess(inst, inst.bids[1], 5, 0).has_value());
    }
}

TEST_CASE("assess clamps the window to one slot when deadline equals arrival") {
    Instance inst;
    inst.horizon = 3;
    inst.num_resources = 1;
    inst.capacities = {1000};
    inst.bids = {simple_bid(0, 2, 1, {400}, {{2, 9}})};
    const auto a = assess(inst, inst.bids[0], 2, 0);
    REQUIRE(a.has_value());
    // e - a = 0; the window clamps to 1 instead of dividing by zero
    CHECK(a->unit_time_value == Rational(9, 1));
}

TEST_CASE("assess ties on price prefer the smaller deadline") {
    Instance inst;
    inst.horizon = 9;
    inst.num_resources = 1;
    inst.capacities = {1000};
    inst.bids = {simple_bid(0, 1, 2, {500}, {{4, 7}, {8, 7}})};
    const auto a = assess(inst, inst.bids[0], 1, 0);
    REQUIRE(a.has_value());
    CHECK(a->active_option == 0);
}

TEST_CASE("per-resource densities divide by each demand") {
    Instance inst;
    inst.horizon = 8;
    inst.num_resources = 2;
    inst.capacities = {1000, 1000};
    inst.bids = {simple_bid(0, 1, 2, {200, 800}, {{5, 12}})};
    const auto a = assess(inst, inst.bids[0], 1, 0);
    REQUIRE(a.has_value());
    CHECK(a->unit_time_value == Rational(3, 1));  // 12 / 4
    CHECK(a->per_resource_density ==
          std::vector<Rational>{Rational(3, 200), Rational(3, 800)});
    CHECK(a->weighted_density == Rational(3, 1000));
    CHECK(a->total_demand == 1000);
}

namespace {

ValueAssessment assessment(int user, std::int64_t price, int window,
                           std::vector<int> demand) {
    ValueAssessment a;
    a.user_id = user;
    a.unit_time_value = Rational(price, window);
    int w = 0;
    for (int r : demand) {
        a.per_resource_density.push_back(a.unit_time_value.over(r));
        w += r;
    }
    a.weighted_density = a.unit_time_value.over(w);
    a.total_demand = w;
    return a;
}

}  // namespace

TEST_CASE("T-RUEM minimizes over users and resources; T-RWAEM over the weighted value") {
    // user 0: u=6, demands {100,600} -> v = {6/100, 1/100}, v' = 6/700
    // user 1: u=4, demands {500,500} -> v = {4/500, 4/500}, v' = 4/1000
    const std::vector<ValueAssessment> as{assessment(0, 6, 1, {100, 600}),
                                          assessment(1, 4, 1, {500, 500})};

    const EvictionChoice ruem = select_victim_truem(as);
    CHECK(ruem.victim_user_id == 1);  // min v^m = 4/500 < 1/100
    CHECK(ruem.strategy_tag == Strategy::TRuem);
    CHECK(ruem.minimum_value == Rational(4, 500));

    const EvictionChoice rwaem = select_victim_trwaem(as);
    CHECK(rwaem.victim_user_id == 1);  // 4/1000 < 6/700
    CHECK(rwaem.strategy_tag == Strategy::TRwaem);
    CHECK(rwaem.minimum_value == Rational(4, 1000));
}

TEST_CASE("the two strategies can disagree on multi-resource inputs") {
    // user 0: u=2, demands {100,900}: v = {2/100, 2/900}, v' = 2/1000
    // user 1: u=1, demands {400,400}: v = {1/400, 1/400}, v' = 1/800
    // T-RUEM min is 2/900 (user 0); T-RWAEM min is 1/800 (user 1)
    const std::vector<ValueAssessment> as{assessment(0, 2, 1, {100, 900}),
                                          assessment(1, 1, 1, {400, 400})};
    CHECK(select_victim_truem(as).victim_user_id == 0);
    CHECK(select_victim_trwaem(as).victim_user_id == 1);
}

TEST_CASE("ties break toward larger total demand, then larger user id") {
    SUBCASE("equal values, different weight") {
        // same v' = 1/200: user 0 (u=2, W=400), user 1 (u=1, W=200)
        const std::vector<ValueAssessment> as{assessment(0, 2, 1, {400}),
                                              assessment(1, 1, 1, {200})};
        CHECK(select_victim_trwaem(as).victim_user_id == 0);
        CHECK(select_victim_truem(as).victim_user_id == 0);
    }
    SUBCASE("fully identical assessments fall back to user id") {
        const std::vector<ValueAssessment> as{assessment(2, 3, 1, {300}),
                                              assessment(7, 3, 1, {300})};
        CHECK(select_victim_trwaem(as).victim_user_id == 7);
        CHECK(select_victim_truem(as).victim_user_id == 7);
    }
}

TEST_CASE("single-resource assessments make both strategies equivalent") {
    const std::vector<ValueAssessment> as{assessment(0, 9, 2, {700}),
                                          assessment(1, 5, 3, {200}),
                                          assessment(2, 2, 1, {900})};
    CHECK(select_victim_truem(as).victim_user_id ==
          select_victim_trwaem(as).victim_user_id);
}

TEST_CASE("empty candidate list yields no victim") {
    const std::vector<ValueAssessment> none;
    CHECK(select_victim_truem(none).victim_user_id == -1);
    CHECK(select_victim_trwaem(none).victim_user_id == -1);
}
