#include <string>

#include "casched/config.hpp"
#include "doctest.h"

using namespace casched;

TEST_CASE("parse_key_values strips comments and blanks") {
    const std::string text =
        "# leading comment\n"
        "\n"
        "users = 10  # trailing comment\n"
        "   \t\n"
        "out_dir=results/exp1\n";
    const auto kvs = parse_key_values(text);
    REQUIRE(kvs.size() == 2);
    CHECK(kvs[0].key == "users");
    CHECK(kvs[0].value == "10");
    CHECK(kvs[0].line == 3);
    CHECK(kvs[1].key == "out_dir");
    CHECK(kvs[1].value == "results/exp1");
    CHECK(kvs[1].line == 5);
}

TEST_CASE("parse_key_values rejects malformed lines") {
    CHECK_THROWS_WITH_AS(parse_key_values("users\n"),
                         "line 1: expected key = value, got 'users'", ConfigError);
    CHECK_THROWS_WITH_AS(parse_key_values("ok = 1\n = 5\n"), "line 2: empty key",
                         ConfigError);
}

TEST_CASE("parse_range accepts single values and inclusive spans") {
    const IntRange one = parse_range("7");
    CHECK(one.lo == 7);
    CHECK(one.hi == 7);
    const IntRange span = parse_range("3..12");
    CHECK(span.lo == 3);
    CHECK(span.hi == 12);
    CHECK_THROWS_AS(parse_range("12..3"), ConfigError);
    CHECK_THROWS_AS(parse_range("abc"), ConfigError);
}

TEST_CASE("parse_generator_config fills every field") {
    const std::string text =
        "users = 10..50\n"
        "resources = 3\n"
        "options = 2\n"
        "horizon = 30\n"
        "slots = 2..8\n"
        "demand = 150..450\n"
        "base_price = 10..90\n"
        "decay_milli = 750\n"
        "slack = 1, 4, 7\n"
        "seed = 17\n";
    const GenerateRequest req = parse_generator_config(text);
    CHECK(req.users.lo == 10);
    CHECK(req.users.hi == 50);
    CHECK(req.spec.num_users == 10);
    CHECK(req.spec.num_resources == 3);
    CHECK(req.spec.num_options == 2);
    CHECK(req.spec.horizon == 30);
    CHECK(req.spec.slots_min == 2);
    CHECK(req.spec.slots_max == 8);
    CHECK(req.spec.demand_min == 150);
    CHECK(req.spec.demand_max == 450);
    CHECK(req.spec.base_price_min == 10);
    CHECK(req.spec.base_price_max == 90);
    CHECK(req.spec.decay_milli == 750);
    CHECK(req.spec.slack == std::vector<int>{1, 4, 7});
    CHECK(req.spec.seed == 17);
}

TEST_CASE("parse_generator_config defaults match GeneratorSpec") {
    const GenerateRequest req = parse_generator_config("");
    const GeneratorSpec fresh;
    CHECK(req.spec.num_users == fresh.num_users);
    CHECK(req.spec.demand_min == fresh.demand_min);
    CHECK(req.spec.demand_max == fresh.demand_max);
    CHECK(req.users.lo == fresh.num_users);
    CHECK(req.users.hi == fresh.num_users);
}

TEST_CASE("unknown generator key names the key and line") {
    CHECK_THROWS_WITH_AS(parse_generator_config("users = 10\nk = 1\n"),
                         "line 2: unknown key 'k'", ConfigError);
}

TEST_CASE("bad integers and empty ranges carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_generator_config("users = ten\n"),
                         "line 1: bad integer 'ten' for key 'users'", ConfigError);
    CHECK_THROWS_WITH_AS(parse_generator_config("demand = 500..100\n"),
                         "line 1: empty range '500..100' for key 'demand'",
                         ConfigError);
}

TEST_CASE("apply_sweep_overrides sets sweep and template fields") {
    SweepConfig cfg;
    cfg.experiment = 3;
    apply_sweep_overrides(
        "repetitions = 5\n"
        "base_seed = 404\n"
        "algorithms = trwaem, oracle\n"
        "workers = 2\n"
        "out_dir = /tmp/sweep\n"
        "timing = true\n"
        "oracle_max_users = 60\n"
        "oracle_max_nodes = 123456\n"
        "oracle_timeout_ms = 2500\n"
        "horizon = 36\n"
        "demand = 200..400\n",
        cfg);
    CHECK(cfg.repetitions == 5);
    CHECK(cfg.base_seed == 404);
    CHECK(cfg.algorithms == std::vector<std::string>{"trwaem", "oracle"});
    CHECK(cfg.workers == 2);
    CHECK(cfg.out_dir == "/tmp/sweep");
    CHECK(cfg.timing);
    CHECK(cfg.oracle_limits.max_users == 60);
    CHECK(cfg.oracle_limits.max_nodes == 123456);
    CHECK(cfg.oracle_limits.timeout == std::chrono::milliseconds{2500});
    CHECK(cfg.base.horizon == 36);
    CHECK(cfg.base.demand_min == 200);
    CHECK(cfg.base.demand_max == 400);
}

TEST_CASE("sweep overrides reject grid-owned keys") {
    SweepConfig cfg;
    for (const char* text : {"users = 10\n", "resources = 2\n", "options = 3\n",
                             "seed = 1\n"}) {
        CAPTURE(text);
        CHECK_THROWS_AS(apply_sweep_overrides(text, cfg), ConfigError);
    }
}

TEST_CASE("sweep overrides validate value shapes") {
    SweepConfig cfg;
    CHECK_THROWS_WITH_AS(apply_sweep_overrides("timing = maybe\n", cfg),
                         "line 1: bad boolean 'maybe' for key 'timing'", ConfigError);
    CHECK_THROWS_WITH_AS(apply_sweep_overrides("workers = many\n", cfg),
                         "line 1: bad integer 'many' for key 'workers'", ConfigError);
}
