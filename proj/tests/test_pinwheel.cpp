#include <doctest.h>

#include <random>

#include "wdsched/oracle.hpp"
#include "wdsched/pinwheel.hpp"

using namespace wdsched;

namespace {

PinwheelSchedule fixed(std::vector<int> slots) {
  PinwheelSchedule s;
  s.period = static_cast<std::int64_t>(slots.size());
  s.slots = std::move(slots);
  return s;
}

void check_valid(const std::optional<PinwheelSchedule>& s, const PinwheelVector& k) {
  REQUIRE(s.has_value());
  PinwheelVerdict v = verify_pinwheel(*s, k);
  CHECK(v.ok);
}

}  // namespace

TEST_CASE("density") {
  CHECK(density({3, 3, 3}) == 1);
  CHECK(density({3, 4, 8, 8, 8}) == Rational(23, 24));
  CHECK(density({7}) == Rational(1, 7));
}

TEST_CASE("step-down classification") {
  CHECK(is_step_down({2, 6, 6, 12, 12}));
  CHECK(is_step_down({12, 2, 6}));
  CHECK_FALSE(is_step_down({3, 5, 15}));
  CHECK(is_step_down({7}));
}

TEST_CASE("step-down scheduler") {
  auto s = schedule_step_down({2, 6, 6, 12, 12});
  check_valid(s, {2, 6, 6, 12, 12});
  CHECK(s->period == 12);
  auto two = schedule_step_down({2, 2});
  check_valid(two, {2, 2});
  CHECK(two->period == 2);
  CHECK_THROWS_AS(schedule_step_down({2, 3}), std::invalid_argument);
  CHECK_FALSE(schedule_step_down({2, 2, 4, 4, 4}).has_value());
}

TEST_CASE("two-value scheduler") {
  check_valid(schedule_two_values({4, 4, 6, 6, 6}), {4, 4, 6, 6, 6});
  check_valid(schedule_two_values({2, 4, 4}), {2, 4, 4});
  check_valid(schedule_two_values({3, 6, 6, 6, 6}), {3, 6, 6, 6, 6});
  CHECK_FALSE(schedule_two_values({3, 3, 3, 3}).has_value());
  CHECK_THROWS_AS(schedule_two_values({2, 3, 4}), std::invalid_argument);
}

TEST_CASE("two-value scheduler is complete on small vectors") {
  for (std::int64_t a = 1; a <= 9; ++a) {
    for (std::int64_t b = a; b <= 12; ++b) {
      for (std::size_t na = 1; na <= 4; ++na) {
        for (std::size_t nb = 0; nb <= 6; ++nb) {
          PinwheelVector k(na, a);
          k.insert(k.end(), nb, b);
          auto s = schedule_two_values(k);
          CHECK(s.has_value() == (density(k) <= 1));
          if (s) CHECK(verify_pinwheel(*s, k).ok);
        }
      }
    }
  }
}

TEST_CASE("two-class scheduler") {
  CHECK_FALSE(schedule_sxy({3, 5, 7, 8, 8}).has_value());
  for (std::int64_t x = 4; x <= 1000; ++x) CHECK_FALSE(schedule_sxy({2, 3, x}).has_value());
  check_valid(schedule_sxy({2, 6, 6, 12, 12}), {2, 6, 6, 12, 12});
  check_valid(schedule_sxy({5, 7, 11, 13, 40}), {5, 7, 11, 13, 40});
}

TEST_CASE("dispatcher covers the golden vectors") {
  for (PinwheelVector k : {PinwheelVector{3, 3, 3}, PinwheelVector{2, 4, 4}, PinwheelVector{3, 4, 8, 8, 8},
                           PinwheelVector{2, 6, 6, 12, 12}, PinwheelVector{4, 4, 6, 6, 6}}) {
    check_valid(schedule_pinwheel(k), k);
  }
  CHECK_FALSE(schedule_pinwheel({2, 3, 12}).has_value());
  CHECK_FALSE(schedule_pinwheel({2, 2, 2}).has_value());
}

TEST_CASE("two-class scheduler meets its density guarantee") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> len(3, 10);
  std::uniform_int_distribution<std::int64_t> val(2, 64);
  int tested = 0;
  while (tested < 200) {
    PinwheelVector k(static_cast<std::size_t>(len(rng)));
    for (auto& x : k) x = val(rng);
    if (density(k) > Rational(7, 10)) continue;
    ++tested;
    check_valid(schedule_sxy(k), k);
  }
}

TEST_CASE("long schedules come with a generator and a certificate") {
  PinwheelVector k{5, 7, 11, 13, 40};
  auto s = schedule_sxy(k, 4);
  REQUIRE(s.has_value());
  CHECK_FALSE(s->materialized());
  REQUIRE(s->generator);
  PinwheelVerdict cert = verify_pinwheel(*s, k, 1);
  CHECK(cert.ok);
  if (s->period <= 1000000) {
    PinwheelVerdict scan = verify_pinwheel(*s, k);
    CHECK(scan.ok);
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(scan.max_gap[i] <= cert.max_gap[i]);
  }
}

TEST_CASE("a short witness exists for (3,5,7,8,8)") {
  PinwheelVector k{3, 5, 7, 8, 8};
  CHECK(verify_pinwheel(fixed({0, 1, 2, 0, 3, 0, 1, 4, 0, 2, 1, 0, 3, 4}), k).ok);
  auto s = schedule_pinwheel(k);
  check_valid(s, k);
  CHECK(s->method == "exhaustive");
}

TEST_CASE("pinwheel verifier") {
  CHECK(verify_pinwheel(fixed({0, 1, 2}), {3, 3, 3}).ok);
  CHECK(verify_pinwheel(fixed({0, 1, 0, 2}), {2, 4, 4}).ok);
  PinwheelVerdict bad = verify_pinwheel(fixed({0, 0, 1}), {2, 2});
  CHECK_FALSE(bad.ok);
  CHECK(bad.task == 1);
  CHECK(bad.gap == 3);
  PinwheelVerdict never = verify_pinwheel(fixed({0, 0}), {2, 2});
  CHECK_FALSE(never.ok);
  CHECK(never.gap == kInfiniteGap);
  CHECK(never.max_gap[0] == 1);
}

TEST_CASE("schedules map onto link activations") {
  auto s = schedule_two_values({2, 4, 4});
  REQUIRE(s);
  CyclicSchedule c = to_cyclic(*s, {{0, 5}, {1}, {2, 3}});
  CHECK(c.period() == s->period);
  CHECK(c.activation_rate(0) == Rational(1, 2));
  CHECK(c.activation_rate(5) == Rational(1, 2));
  CHECK(c.activation_rate(3) == Rational(1, 4));
}
