#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "leafwind/index.hpp"
#include "leafwind/scenario.hpp"
#include "suites.hpp"

namespace {

using namespace leafwind;

PolyPath vertical() { return PolyPath::segment({0, 1}, {0, 2}); }

TEST(IndexValue, QuarterBookkeeping) {
  const IndexValue v = IndexValue::from_halves(3);
  EXPECT_EQ(v.quarters(), 6);
  EXPECT_EQ(v.halves(), 3);
  EXPECT_DOUBLE_EQ(v.value(), 1.5);
  EXPECT_EQ(v.display(), "3/2");
  EXPECT_EQ(IndexValue::from_halves(-2).display(), "-2/2");
  EXPECT_EQ(IndexValue::from_quarters(-4), IndexValue::from_halves(-2));
  EXPECT_THROW(IndexValue::from_quarters(3), std::logic_error);
}

TEST(PoincareHopf, Examples) {
  const PlaneHomeo id = PlaneHomeo::identity();
  EXPECT_EQ(poincare_hopf_index([](Point) { return Vector{1, 0}; }, id, vertical()).value,
            IndexValue::from_halves(0));
  EXPECT_EQ(poincare_hopf_index(BandSpiral(1).vector_field(), id, vertical()).value, IndexValue::from_halves(1));
  EXPECT_EQ(poincare_hopf_index(BandSpiral(4).vector_field(), id, vertical()).value, IndexValue::from_halves(4));
}

TEST(PoincareHopf, EndpointOffAxisIsRejected) {
  EXPECT_THROW(poincare_hopf_index(BandSpiral(1).vector_field(), PlaneHomeo::identity(),
                                   PolyPath::segment({0, 1}, {0, 1.5})),
               EndpointNotOnAxisClass);
}

TEST(LeRoux, TranslationIsZero) {
  const HandelWitness w = HandelWitness::verify(PlaneHomeo::identity(), translation_T(), {0, 1}, {0, 2},
                                                HandelWitness::Justification::ExplicitModel);
  EXPECT_EQ(leroux_index_via_theta(w, {0, 1}, {0, 2}, vertical()).value, IndexValue::from_halves(0));
}

TEST(LeRoux, ReebAndBandSpiralThree) {
  for (int n : {1, 3}) {
    const BandSpiral b(n);
    const Foliation o = b.orthogonal();
    const HandelWitness w =
        HandelWitness::verify(PlaneHomeo::identity(), flow_time_one(b.vector_field()), {0, 1}, {0, 2},
                              HandelWitness::Justification::StrDaggerSeparated, &o, b.barrier_height());
    EXPECT_LT(w.barrier_error(), 1e-5);
    const IndexResult r = leroux_index_via_theta(w, {0, 1}, {0, 2}, vertical());
    EXPECT_EQ(r.value, IndexValue::from_halves(n));
    EXPECT_NEAR(r.float_oracle, 0.5 * n, 1e-6);
  }
}

TEST(LeRoux, EndpointsMustBeOnRows) {
  const HandelWitness w = HandelWitness::verify(PlaneHomeo::identity(), translation_T(), {0, 1}, {0, 2},
                                                HandelWitness::Justification::ExplicitModel);
  EXPECT_THROW(leroux_index_via_theta(w, {0.5, 1}, {0, 2}, PolyPath::segment({0.5, 1}, {0, 2})),
               InvalidArgument);
  EXPECT_THROW(leroux_index_via_theta(w, {0, 1}, {0, 2}, PolyPath::segment({0, 1}, {1, 2})), InvalidArgument);
}

TEST(Witness, RejectsWrongConjugacy) {
  EXPECT_THROW(HandelWitness::verify(PlaneHomeo::translation({0, 0.5}), translation_T(), {0, 1}, {0, 2},
                                     HandelWitness::Justification::ExplicitModel),
               WitnessInvalid);
  const BandSpiral b(2);
  const Foliation o = b.orthogonal();
  EXPECT_THROW(HandelWitness::verify(PlaneHomeo::identity(), flow_time_one(b.vector_field()), {0, 1}, {0, 2},
                                     HandelWitness::Justification::StrDaggerSeparated, &o, 1.5),
               WitnessInvalid);
}

TEST(StrMapTest, CertifiesRowsOnly) {
  const auto g1 = OrientedLine::horizontal(1), g2 = OrientedLine::horizontal(2);
  EXPECT_LT(StrMap::certify(PlaneHomeo::shear_x(0.4), g1, g2).certificate(), 1e-12);
  EXPECT_THROW(StrMap::certify(PlaneHomeo::translation({0, 0.1}), g1, g2), WitnessInvalid);
}

TEST(FoliationIndex, HorizontalLinesAreNotTransverseToHorizontal) {
  const auto g1 = OrientedLine::horizontal(1), g2 = OrientedLine::horizontal(2);
  const StrMap h = StrMap::certify(PlaneHomeo::identity(), g1, g2);
  EXPECT_THROW(foliation_index(horizontal(), g1, g2, h, 1e-2, vertical()), NotTransverse);
}

TEST(FoliationIndex, BandSpiralIsHalfN) {
  for (int n = 0; n <= 5; ++n) {
    const BandSpiral b(n);
    const auto g1 = flow_line(b.vector_field(), {0, 1}), g2 = flow_line(b.vector_field(), {0, 2});
    const StrMap h = StrMap::certify(PlaneHomeo::identity(), g1, g2);
    const IndexResult r = foliation_index(b.orthogonal(), g1, g2, h, 1e-2, vertical());
    EXPECT_EQ(r.value, IndexValue::from_halves(n)) << n;
    EXPECT_EQ(r.value.quarters() % 2, 0);
    const double f = intuitive_index_float(b.orthogonal(), g1, g2, h, 1e-2, vertical());
    EXPECT_LT(std::abs(4 * f - static_cast<double>(r.value.quarters())), 1e-5) << n;
    if (n == 0) EXPECT_NEAR(f, 0.0, 1e-9);
    if (n == 2) EXPECT_NEAR(f, 1.0, 1e-6);
    if (n == 5) EXPECT_NEAR(f, 2.5, 1e-6);
  }
}

TEST(FoliationIndex, IntersectingLinesGiveZero) {
  const BandSpiral b(2);
  const auto g1 = flow_line(b.vector_field(), {0, 1});
  const auto g2 = OrientedLine::analytic([](double t) { return Point{t, 2 + 0.5 * t}; });
  const StrMap h = StrMap::certify(PlaneHomeo::identity(), g1, OrientedLine::horizontal(2));
  const IndexResult r = foliation_index(b.orthogonal(), g1, g2, h, 1e-2, vertical());
  EXPECT_EQ(r.value, IndexValue::from_halves(0));
  EXPECT_EQ(r.reason, "intersecting");
}

TEST(FoliationIndex, EpsInsideGrayZoneIsRejected) {
  const BandSpiral b(1);
  const auto g1 = flow_line(b.vector_field(), {0, 1}), g2 = flow_line(b.vector_field(), {0, 2});
  const StrMap h = StrMap::certify(PlaneHomeo::identity(), g1, g2);
  EXPECT_THROW(foliation_index(b.orthogonal(), g1, g2, h, 1e-4, vertical()), InvalidArgument);
}

TEST(FoliationIndex, ChoiceIndependence) {
  for (int n = 0; n <= 5; ++n) {
    const auto t = suites::choice_independence(n);
    EXPECT_TRUE(t.ok()) << t.first_failure;
    EXPECT_EQ(t.checks, 30u);
  }
}

// Swapping the two lines with the half turn about (0, 1.5) as Str map.
// Measured before being frozen here; no symmetry law is assumed.
TEST(FoliationIndex, SwappedLinesRegression) {
  const int frozen_halves[] = {0, -1, -2, -3, -4, -5};
  for (int n = 0; n <= 5; ++n) {
    const BandSpiral b(n);
    const auto g1 = flow_line(b.vector_field(), {0, 1}), g2 = flow_line(b.vector_field(), {0, 2});
    const StrMap h = StrMap::certify(PlaneHomeo::half_turn({0, 1.5}), g2, g1);
    const IndexResult r = foliation_index(b.orthogonal(), g2, g1, h, 1e-2, vertical().reversed());
    EXPECT_EQ(r.value.halves(), frozen_halves[n]) << n;
  }
}

TEST(Isotopy, LeRouxInvariantUnderBumps) {
  for (int n = 0; n <= 5; ++n) {
    const auto t = suites::isotopy_invariance(n);
    EXPECT_TRUE(t.ok()) << t.first_failure;
  }
}

TEST(TheoremA, AllMethodsAgreeForBandSpirals) {
  for (int n = 0; n <= 5; ++n) {
    const TheoremAReport rep = theorem_a_check(build_scenario(band_spiral_spec(n)));
    EXPECT_TRUE(rep.verdict) << n << " " << rep.failed_stage;
    ASSERT_EQ(rep.outcomes.size(), 3u);
    for (const auto& o : rep.outcomes) {
      ASSERT_TRUE(o.result) << to_string(o.method) << ": " << o.error;
      EXPECT_EQ(o.result->value.quarters(), 2 * n) << to_string(o.method);
      EXPECT_NEAR(o.float_oracle.value(), 0.5 * n, 1e-6) << to_string(o.method);
    }
  }
}

TEST(Scenario, HorizontalTranslation) {
  ScenarioSpec s;
  s.family = Family::Horizontal;
  s.map = MapKind::Translation;
  const Scenario sc = build_scenario(s);
  EXPECT_EQ(sc.witness.justification(), HandelWitness::Justification::ExplicitModel);
  const TheoremAReport rep = theorem_a_check(sc);
  EXPECT_TRUE(rep.verdict);
  for (const auto& o : rep.outcomes) EXPECT_EQ(o.result->value.halves(), 0);
}

TEST(Scenario, BentModel) {
  ScenarioSpec s = band_spiral_spec(2);
  s.bend = 0.3;
  s.shear = 0.25;
  const TheoremAReport rep = theorem_a_check(build_scenario(s));
  EXPECT_TRUE(rep.verdict) << rep.failed_stage;
  for (const auto& o : rep.outcomes) EXPECT_EQ(o.result->value.halves(), 2) << to_string(o.method);
}

TEST(Scenario, PerturbedMapKeepsLeRoux) {
  ScenarioSpec s = band_spiral_spec(1);
  s.map = MapKind::Perturbed;
  s.bump = BumpSpec{{0.5, 1.5}, 0.2, {0.0, 0.05}};
  const TheoremAReport rep = theorem_a_check(build_scenario(s));
  EXPECT_TRUE(rep.verdict);
  EXPECT_EQ(rep.find(Method::LeRoux)->result->value.halves(), 1);
  EXPECT_EQ(rep.find(Method::PoincareHopf)->reason, "not applicable");
  EXPECT_EQ(rep.find(Method::Foliation)->reason, "not applicable");
}

TEST(Scenario, IntersectingLines) {
  ScenarioSpec s;
  s.family = Family::Horizontal;
  s.map = MapKind::Translation;
  s.line2 = {LineSpec::Kind::Tilted, 2.0, 0.5};
  const Scenario sc = build_scenario(s);
  EXPECT_TRUE(sc.intersecting);
  const TheoremAReport rep = theorem_a_check(sc);
  const MethodOutcome* f = rep.find(Method::Foliation);
  EXPECT_EQ(f->reason, "intersecting");
  EXPECT_EQ(f->result->value.halves(), 0);
}

TEST(Scenario, LoadErrors) {
  ScenarioSpec same = band_spiral_spec(1);
  same.seed2 = {3.0, 1.0};
  EXPECT_THROW(build_scenario(same), ConfigError);
  ScenarioSpec coincide = band_spiral_spec(1);
  coincide.seed2 = coincide.seed1;
  EXPECT_THROW(build_scenario(coincide), ConfigError);
  ScenarioSpec translated = band_spiral_spec(2);
  translated.map = MapKind::Translation;
  EXPECT_THROW(build_scenario(translated), ConfigError);
  ScenarioSpec touch = band_spiral_spec(1);
  touch.map = MapKind::Perturbed;
  touch.bump = BumpSpec{{0.0, 1.1}, 0.2, {0.0, 0.01}};
  EXPECT_THROW(build_scenario(touch), OrbitTouched);
}

TEST(Scenario, AlternativePathVerification) {
  ScenarioSpec s = band_spiral_spec(3);
  s.verify_choices = true;
  const TheoremAReport rep = theorem_a_check(build_scenario(s));
  EXPECT_TRUE(rep.verdict);
}

}  // namespace
