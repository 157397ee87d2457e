#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "slicer/model.hpp"

using namespace slicer;

namespace {

NetworkService svc(const std::string& id) { return {id, id, {id + "-vf"}, {}}; }

Sla sla(double lat, double av, double rate) { return {"s", lat, av, rate, ""}; }

}  // namespace

TEST_CASE("resource demand arithmetic") {
  const ResourceDemand a{1, 2, 3, 4};
  const ResourceDemand b{4, 3, 2, 1};
  CHECK(a + b == ResourceDemand{5, 5, 5, 5});
  CHECK(a - b == ResourceDemand{-3, -1, 1, 3});
  CHECK_FALSE((a - b).non_negative());
  CHECK(componentwise_max(a, b) == ResourceDemand{4, 3, 3, 4});
  CHECK(a.fits_within(a));
  CHECK_FALSE(a.fits_within(b));
  CHECK_THROWS_AS((a - b).validate(), Error);
}

TEST_CASE("semantic versions parse and order") {
  CHECK(SemVer::parse("1.3.0") == SemVer{1, 3, 0});
  CHECK(SemVer::parse("1.10.0") > SemVer::parse("1.9.9"));
  CHECK(to_string(SemVer{2, 0, 1}) == "2.0.1");
  CHECK_THROWS_AS(SemVer::parse("1.x"), Error);
  CHECK_THROWS_AS(SemVer::parse(""), Error);
}

TEST_CASE("profile validation") {
  ServiceProfile p;
  CHECK_NOTHROW(p.validate());
  p.end_to_end_latency = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.service_availability = 1.5;
  CHECK_THROWS_AS(p.validate(), Error);
  p.service_availability = 1.0;
  CHECK_NOTHROW(p.validate());
  CHECK(profile_warnings(p).size() == 1);
  p.service_availability = 0.999;
  CHECK(profile_warnings(p).empty());
}

TEST_CASE("compose_slice rejects empty and duplicate service lists") {
  ServiceProfile p;
  try {
    compose_slice("x", "x", "c", "p", {}, p);
    FAIL("expected EmptySlice");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptySlice);
  }
  try {
    compose_slice("x", "x", "c", "p", {svc("a"), svc("a")}, p);
    FAIL("expected Duplicate");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Duplicate);
  }
  const auto s = compose_slice("x", "x", "c", "p", {svc("a"), svc("b")}, p);
  CHECK(s.services == std::vector<EntityId>{"a", "b"});
}

TEST_CASE("worked chain example") {
  const Sla out = compose_slas({sla(3, 0.99, 100), sla(2, 0.999, 50)}, true);
  const auto o = oracle::chain({{3, 0.99, 100}, {2, 0.999, 50}});
  CHECK(out.committed_latency == o.latency);
  CHECK(out.committed_availability == doctest::Approx(0.98901).epsilon(1e-12));
  CHECK(out.committed_availability == o.availability);
  CHECK(out.committed_data_rate == 50);
}

TEST_CASE("parallel composition takes the slowest member") {
  const Sla out = compose_slas({sla(3, 0.99, 100), sla(7, 0.9, 20), sla(2, 0.999, 50)}, false);
  CHECK(out.committed_latency == 7);
  CHECK(out.committed_data_rate == 20);
  CHECK(out.committed_availability == doctest::Approx(0.99 * 0.9 * 0.999));
}

TEST_CASE("composition properties on random chains") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(0.1, 20.0), av(0.9, 1.0), rate(1.0, 1000.0);
  for (int iter = 0; iter < 500; ++iter) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    std::vector<Sla> parts;
    std::vector<oracle::SlaTriple> triples;
    for (int i = 0; i < n; ++i) {
      parts.push_back(sla(lat(rng), av(rng), rate(rng)));
      triples.push_back({parts.back().committed_latency, parts.back().committed_availability,
                         parts.back().committed_data_rate});
    }
    for (bool chain : {true, false}) {
      const Sla got = compose_slas(parts, chain);
      const auto want = chain ? oracle::chain(triples) : oracle::parallel(triples);
      CHECK(got.committed_latency == doctest::Approx(want.latency).epsilon(1e-12));
      CHECK(got.committed_availability == doctest::Approx(want.availability).epsilon(1e-12));
      CHECK(got.committed_data_rate == want.data_rate);

      if (n == 1) {
        CHECK(got.committed_latency == parts[0].committed_latency);
        CHECK(got.committed_availability == parts[0].committed_availability);
        CHECK(got.committed_data_rate == parts[0].committed_data_rate);
      }
      auto more = parts;
      more.push_back(sla(lat(rng), av(rng), rate(rng)));
      const Sla bigger = compose_slas(more, chain);
      CHECK(bigger.committed_latency >= got.committed_latency);
      CHECK(bigger.committed_availability <= got.committed_availability);
      CHECK(bigger.committed_data_rate <= got.committed_data_rate);
    }
  }
}

TEST_CASE("default slice template respects the profile") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    ServiceProfile p;
    p.end_to_end_latency = std::uniform_real_distribution<double>(0.5, 50)(rng);
    p.service_availability = std::uniform_real_distribution<double>(0.5, 1.0)(rng);
    std::vector<NetworkService> members;
    for (int i = 0; i < n; ++i) members.push_back(svc("svc" + std::to_string(i)));
    for (bool chain : {true, false}) {
      NetworkSlice s = compose_slice("sl", "sl", "c", "p", members, p, chain);
      const SliceTemplate t = default_slice_template(s, {});
      CHECK_NOTHROW(t.validate(s));
      std::map<EntityId, Sla> slas;
      for (const auto& id : s.services) slas[id] = derive_service_sla(p, t, id);
      const Sla agg = aggregate_sla(s, slas);
      CHECK(agg.committed_latency <= p.end_to_end_latency + kSlaTolerance);
      CHECK(agg.committed_availability >= p.service_availability - kSlaTolerance);
      CHECK_NOTHROW(with_sla(s, agg));
    }
  }
}

TEST_CASE("aggregate rejects SLAs that break the profile") {
  ServiceProfile p;
  p.end_to_end_latency = 4;
  NetworkSlice s = compose_slice("sl", "sl", "c", "p", {svc("a"), svc("b")}, p);
  std::map<EntityId, Sla> slas{{"a", sla(3, 0.999, 100)}, {"b", sla(2, 0.999, 100)}};
  try {
    aggregate_sla(s, slas);
    FAIL("expected SlaViolatesProfile");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SlaViolatesProfile);
  }
  slas.erase("b");
  try {
    aggregate_sla(s, slas);
    FAIL("expected MissingServiceSla");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingServiceSla);
  }
}

TEST_CASE("slice template budgets must fit a chain") {
  ServiceProfile p;
  p.end_to_end_latency = 5;
  NetworkSlice s = compose_slice("sl", "sl", "c", "p", {svc("a"), svc("b")}, p);
  SliceTemplate t;
  t.slice_id = "sl";
  t.per_service_requirements["a"] = {3, 0.999, 100, {}};
  t.per_service_requirements["b"] = {3, 0.999, 100, {}};
  CHECK_THROWS_AS(t.validate(s), Error);
  s.chain_order = false;
  CHECK_NOTHROW(t.validate(s));
  t.per_service_requirements.erase("b");
  CHECK_THROWS_AS(t.validate(s), Error);
}
