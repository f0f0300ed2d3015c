#include <doctest.h>

#include "helpers.hpp"
#include "ncbcast/model.hpp"

using namespace ncbcast;
using namespace ncbcast::testing;

TEST_CASE("packet duration matches the satellite scenario arithmetic") {
    const SystemParams p = satellite_params();
    CHECK(packet_duration(p) == doctest::Approx(10180.0 / 1.5e6).epsilon(1e-12));
}

TEST_CASE("packet duration unit-rate identity") {
    SystemParams p;
    p.M = 1;
    p.N = 1;
    p.R = 1234.5;
    p.n = 1234.5;
    p.h = 0;
    p.g = 0;
    p.channels.assign(1, ChannelParams{});
    CHECK(packet_duration(p) == 1.0);
}

TEST_CASE("packet duration strictly increases with M when g > 0") {
    SystemParams p = satellite_params();
    const double t5 = packet_duration(p);
    p.M = 10;
    CHECK(packet_duration(p) > t5);
}

TEST_CASE("ack offsets: equal round trips serialize ACKs back-to-back") {
    const SystemParams p = satellite_params();
    const double t_ack = 50.0 / 1.5e6;
    const auto offsets = ack_wait_offsets(p);
    REQUIRE(offsets.size() == 2);
    CHECK(offsets[0] == 0.0);
    CHECK(offsets[1] == doctest::Approx(t_ack).epsilon(1e-12));

    SystemParams p4 = satellite_params(0.0, 5, 4);
    const auto offs4 = ack_wait_offsets(p4);
    for (int k = 0; k < 4; ++k) CHECK(offs4[k] == doctest::Approx(k * t_ack).epsilon(1e-12));
}

TEST_CASE("ack offsets: single receiver base case") {
    const SystemParams p = single_link(0.3);
    CHECK(ack_wait_offsets(p) == std::vector<double>{0.0});
}

TEST_CASE("ack offsets: interfering mode shifts the first ACK") {
    SystemParams p = satellite_params();
    p.ack_mode = AckMode::Interfering;
    p.channels[0].t_rt = 0.2;
    p.channels[1].t_rt = 0.25;
    CHECK(ack_wait_offsets(p)[0] == doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("ack offsets are never negative") {
    SystemParams p = satellite_params(0.0, 5, 3);
    p.channels[0].t_rt = 0.01;
    p.channels[1].t_rt = 0.2;
    p.channels[2].t_rt = 0.9;
    for (double t : ack_wait_offsets(p)) CHECK(t >= 0.0);
}

TEST_CASE("wait time formula") {
    SystemParams p = single_link(0.0);
    CHECK(wait_time(p) == doctest::Approx(0.25 + 50.0 / 1.5e6).epsilon(1e-12));

    SUBCASE("all-zero timing") {
        p.n_ack = 0;
        p.channels[0].t_rt = 0;
        CHECK(wait_time(p) == 0.0);
    }
    SUBCASE("two equal receivers: T_rt + 2 T_ack") {
        const SystemParams p2 = satellite_params();
        CHECK(wait_time(p2) == doctest::Approx(0.25 + 2 * 50.0 / 1.5e6).epsilon(1e-12));
    }
}

TEST_CASE("wait time is invariant to permuting equal-t_rt channels") {
    SystemParams p = satellite_params(0.0, 5, 3);
    p.channels[0].pe = 0.1;
    p.channels[2].pe = 0.7;
    const double w = wait_time(p);
    std::swap(p.channels[0], p.channels[2]);
    CHECK(wait_time(p) == w);
}

TEST_CASE("round duration") {
    const SystemParams p = satellite_params();
    const double t_p = packet_duration(p);
    const double t_w = wait_time(p);
    CHECK(round_duration(p, 1) == doctest::Approx(t_p + t_w).epsilon(1e-12));
    CHECK(round_duration(p, 5) == doctest::Approx(5 * t_p + t_w).epsilon(1e-12));
    // Affinity in the burst length.
    CHECK(round_duration(p, 7) ==
          doctest::Approx(round_duration(p, 3) + 4 * t_p).epsilon(1e-12));
    CHECK_THROWS_AS(round_duration(p, 0), std::invalid_argument);
}

TEST_CASE("round duration is strictly increasing in the burst length") {
    const SystemParams p = satellite_params(0.4);
    for (int k = 1; k < 20; ++k) CHECK(round_duration(p, k + 1) > round_duration(p, k));
}

TEST_CASE("rt_from_distance") {
    CHECK(rt_from_distance(0.0, 3e8) == 0.0);
    CHECK(rt_from_distance(1.5e8, 3e8) == 1.0);
    CHECK(rt_from_distance(3.75e7, 3e8) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(rt_from_distance(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rt_from_distance(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("validation rejects malformed parameters") {
    SystemParams p = satellite_params();
    SUBCASE("unsorted round trips") {
        p.channels[0].t_rt = 0.5;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("probability out of range") {
        p.channels[1].pe = 1.5;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("channel count mismatch") {
        p.channels.pop_back();
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("nonpositive rate") {
        p.R = 0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
}
