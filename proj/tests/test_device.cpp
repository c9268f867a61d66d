#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "memsynth/device.hpp"
#include "memsynth/errors.hpp"

using namespace memsynth;

namespace {
constexpr auto L0 = LogicLevel::Logic0;
constexpr auto L1 = LogicLevel::Logic1;
}  // namespace

TEST_CASE("step follows the threshold latch listing") {
  auto r = MemristorDevice(L0).step(0.7);
  CHECK(r.new_state == L1);
  CHECK(r.vout == L1);

  r = MemristorDevice(L1).step(0.5);
  CHECK(r.new_state == L1);
  CHECK(r.vout == L1);

  r = MemristorDevice(L1).step(0.2);
  CHECK(r.new_state == L0);
  CHECK(r.vout == L0);

  // Logic0 holds under any input at or below threshold.
  CHECK(MemristorDevice(L0).step(0.5).new_state == L0);
  CHECK(MemristorDevice(L0).step(0.0).new_state == L0);
}

TEST_CASE("step rejects non-finite input") {
  const MemristorDevice d;
  CHECK_THROWS_AS(d.step(std::numeric_limits<double>::quiet_NaN()), InputError);
  CHECK_THROWS_AS(d.step(std::numeric_limits<double>::infinity()), InputError);
  CHECK_THROWS_AS(d.stepped(-std::numeric_limits<double>::infinity()), InputError);
}

TEST_CASE("set_state") {
  CHECK(MemristorDevice(L0).with_state(L1).state() == L1);
  CHECK(MemristorDevice(L1).with_state(L1).state() == L1);
  CHECK(MemristorDevice(L1).with_state(L0).state() == L0);
}

TEST_CASE("defaults and parameter validation") {
  const MemristorDevice d;
  CHECK(d.state() == L0);
  CHECK(d.threshold() == 0.5);
  CHECK(d.switch_delay() == 1.0);
  CHECK_THROWS_AS(MemristorDevice(L0, 0.0), InputError);
  CHECK_THROWS_AS(MemristorDevice(L0, 1.0), InputError);
  CHECK_THROWS_AS(MemristorDevice(L0, 0.5, 0.0), InputError);
  CHECK_THROWS_AS(MemristorDevice(L0, 0.5, -1.0), InputError);
  CHECK_NOTHROW(MemristorDevice(L1, 0.01, 1e-3));
}

TEST_CASE("voltage convention") {
  CHECK(to_volts(L0) == 0.0);
  CHECK(to_volts(L1) == 1.0);
  CHECK(!L0 == L1);
  CHECK(parse_level("1") == L1);
  CHECK_THROWS_AS(parse_level("2"), InputError);
}

TEST_CASE("property: idempotent under constant input") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> volts(-2.0, 3.0);
  std::uniform_real_distribution<double> th(0.05, 0.95);
  for (int i = 0; i < 5000; ++i) {
    const MemristorDevice d(to_level(rng() & 1), th(rng));
    const double v = volts(rng);
    const auto once = d.stepped(v);
    CHECK(once.stepped(v).state() == once.state());
  }
}

TEST_CASE("property: full-swing inputs determine the state") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> th(0.01, 0.99);
  for (int i = 0; i < 2000; ++i) {
    const MemristorDevice d(to_level(rng() & 1), th(rng));
    CHECK(d.stepped(1.0).state() == L1);
    CHECK(d.stepped(0.0).state() == L0);
  }
}

TEST_CASE("property: input exactly at threshold never changes state") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(0.01, 0.99);
  for (int i = 0; i < 500; ++i) {
    const MemristorDevice start(to_level(rng() & 1), th(rng));
    MemristorDevice d = start;
    for (int k = 0; k < 20; ++k) d = d.stepped(d.threshold());
    CHECK(d == start);
  }
}

TEST_CASE("property: serialization round-trips exactly") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> th(1e-6, 1.0 - 1e-6);
  std::uniform_real_distribution<double> delay(1e-6, 1e3);
  for (int i = 0; i < 2000; ++i) {
    const MemristorDevice d(to_level(rng() & 1), th(rng), delay(rng));
    const auto back = MemristorDevice::deserialize(d.serialize());
    CHECK(back == d);
  }
  CHECK(MemristorDevice(L1).serialize() == "1 0.5 1");
  CHECK_THROWS_AS(MemristorDevice::deserialize("1 0.5"), InputError);
  CHECK_THROWS_AS(MemristorDevice::deserialize("x 0.5 1"), InputError);
  CHECK_THROWS_AS(MemristorDevice::deserialize("1 1.5 1"), InputError);
}
