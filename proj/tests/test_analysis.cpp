#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "unrest/analysis.hpp"
#include "unrest/errors.hpp"
#include "unrest/integrator.hpp"

using namespace unrest;
namespace oracle = unrest::testing;
using oracle::uniform;

namespace {

const double kC1 = kDefaultEnthusiasm;
const double kC2 = kDefaultPolicingEfficiency;

// Final state after a shock of size delta from `from`.
double after_shock(const ModelParams& p, double from, double delta) {
  const std::vector<Shock> shocks{{0.0, delta}};
  return simulate(Fraction(from), p, shocks, 2.0, SolverConfig{5e-4, 1e-10, 2.0}).final_r();
}

}  // namespace

TEST(AxisRange, CellCentres) {
  const auto c = AxisRange{0.2, 0.6, 4}.centers();
  ASSERT_EQ(c.size(), 4u);
  EXPECT_DOUBLE_EQ(c[0], 0.25);
  EXPECT_DOUBLE_EQ(c[3], 0.55);
  EXPECT_THROW(AxisRange({0.0, 1.0, 4}).centers(), ValidationError);
}

TEST(Sweep, RejectsBadRanges) {
  EXPECT_THROW(sweep_regions({0.0, 0.5, 10}, {0.1, 0.9, 10}, 1, 1), ValidationError);
  EXPECT_THROW(sweep_regions({0.1, 0.9, 1}, {0.1, 0.9, 10}, 1, 1), ValidationError);
  EXPECT_THROW(sweep_regions({0.6, 0.5, 10}, {0.1, 0.9, 10}, 1, 1), ValidationError);
}

TEST(Sweep, SpotCells) {
  // Two cells per axis, the first centred on the target point.
  const RegionGrid a = sweep_regions({0.49, 0.53, 2}, {0.29, 0.33, 2}, 2.302585, 69.0776);
  EXPECT_DOUBLE_EQ(a.alpha_axis[0], 0.5);
  EXPECT_DOUBLE_EQ(a.beta_axis[0], 0.3);
  EXPECT_EQ(a.at(0, 0), RegionLabel::II);

  const RegionGrid b = sweep_regions({0.975, 0.995, 2}, {0.045, 0.065, 2}, 2.302585, 69.0776);
  EXPECT_DOUBLE_EQ(b.alpha_axis[0], 0.98);
  EXPECT_DOUBLE_EQ(b.beta_axis[0], 0.05);
  EXPECT_EQ(b.at(0, 0), RegionLabel::IIIe);
}

TEST(Sweep, SmallBetaAboveDiagonalIsUnstablePoliceState) {
  const RegionGrid g = sweep_regions({0.01, 0.99, 120}, {0.001, 0.999, 120}, kC1, kC2);
  int checked = 0;
  for (std::size_t i = 0; i < g.alpha_axis.size(); ++i) {
    for (std::size_t j = 0; j < g.beta_axis.size(); ++j) {
      const double a = g.alpha_axis[i], b = g.beta_axis[j];
      if (a + b > 1.0 + 1e-9 && b < 1.0 / 31) {
        EXPECT_EQ(g.at(i, j), RegionLabel::III1) << a << ", " << b;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Sweep, AgreesWithClassifierAndInequalities) {
  const RegionGrid g = sweep_regions({0.01, 0.99, 97}, {0.01, 0.99, 89}, 3.0, 40.0);
  ASSERT_EQ(g.cells.size(), 97u * 89u);
  for (std::size_t i = 0; i < g.alpha_axis.size(); ++i) {
    for (std::size_t j = 0; j < g.beta_axis.size(); ++j) {
      const ModelParams p(g.alpha_axis[i], g.beta_axis[j], 3.0, 40.0);
      ASSERT_EQ(g.at(i, j), classify_region(p).label);
      ASSERT_EQ(to_string(g.at(i, j)),
                oracle::region_by_inequalities({p.alpha(), p.beta(), 3.0, 40.0}));
    }
  }
}

TEST(Sweep, IndependentOfThreadCount) {
  const AxisRange ax{0.01, 0.99, 64}, bx{0.01, 0.99, 50};
  const RegionGrid one = sweep_regions(ax, bx, kC1, kC2, 1);
  for (unsigned t : {2u, 3u, 7u, 64u, 200u}) {
    EXPECT_EQ(sweep_regions(ax, bx, kC1, kC2, t).cells, one.cells) << t;
  }
}

TEST(Escape, PoliceStateFromZeroNeedsBeta) {
  const ModelParams p(0.96, 0.06, 2.302585, 69.0776);
  const EscapeReport e = escape_shock(p, Fraction(0.0));
  EXPECT_NEAR(e.minimal_shock, 0.06, 1e-15);
  EXPECT_EQ(e.attainment, Attainment::Closed);
  EXPECT_EQ(e.destination.value.value(), 1.0);
  EXPECT_LT(after_shock(p, 0.0, 0.0599), 1e-3);
  EXPECT_GT(after_shock(p, 0.0, 0.0601), 0.9);
  EXPECT_GT(after_shock(p, 0.0, 0.06), 0.9);
}

TEST(Escape, MetaStableFromZeroNeedsVisibilityGap) {
  const ModelParams p(0.98, 0.05, 2.302585, 69.0776);
  const EscapeReport e = escape_shock(p, Fraction(0.0));
  EXPECT_NEAR(e.minimal_shock, 0.02, 1e-15);
  EXPECT_EQ(e.attainment, Attainment::Open);
  EXPECT_NEAR(e.destination.value.value(), c_star(p.c1(), p.c2()), 1e-15);
  // Landing exactly on 1 - alpha stays in the basin of 0.
  EXPECT_LT(after_shock(p, 0.0, 1.0 - 0.98), 1e-3);
  EXPECT_NEAR(after_shock(p, 0.0, 0.0201), c_star(p.c1(), p.c2()), 1e-4);
}

TEST(Escape, MetaStableFromCstar) {
  const ModelParams p(0.98, 0.05, 2.302585, 69.0776);
  const double cs = c_star(p.c1(), p.c2());
  const EscapeReport e = escape_shock(p, Fraction(cs));
  EXPECT_NEAR(e.minimal_shock, 0.017742, 1e-6);
  EXPECT_EQ(e.attainment, Attainment::Closed);
  EXPECT_EQ(e.destination.value.value(), 1.0);
  EXPECT_NEAR(after_shock(p, cs, e.minimal_shock - 1e-4), cs, 1e-4);
  EXPECT_GT(after_shock(p, cs, e.minimal_shock + 1e-4), 0.9);
}

TEST(Escape, OtherRegions) {
  const EscapeReport unstable = escape_shock(ModelParams(0.98, 0.02, kC1, kC2), Fraction(0.0));
  EXPECT_NEAR(unstable.minimal_shock, 0.02, 1e-15);
  EXPECT_EQ(unstable.attainment, Attainment::Open);
  EXPECT_EQ(unstable.destination.value.value(), 1.0);

  const EscapeReport failed = escape_shock(ModelParams(0.3, 0.2, kC1, kC2), Fraction(0.0));
  EXPECT_EQ(failed.minimal_shock, 0.2);
  EXPECT_EQ(failed.attainment, Attainment::Closed);
  EXPECT_EQ(failed.destination.stability, Stability::ContinuumStable);
}

TEST(Escape, RejectsNonEquilibria) {
  const ModelParams p(0.98, 0.05, kC1, kC2);
  EXPECT_THROW(escape_shock(p, Fraction(0.01)), ValidationError);
  EXPECT_THROW(escape_shock(p, Fraction(1.0)), ValidationError);
  // No interior equilibrium in III0.
  EXPECT_THROW(escape_shock(ModelParams(0.96, 0.06, kC1, kC2), Fraction(1.0 / 31)),
               ValidationError);
}

TEST(Escape, BracketsHoldBySimulation) {
  std::mt19937_64 rng(99);
  int meta = 0, stable = 0;
  while (meta < 40 || stable < 40) {
    const ModelParams p(uniform(rng, 0.01, 0.99), uniform(rng, 0.01, 0.99), uniform(rng, 6, 12),
                        uniform(rng, 6, 300));
    const RegionLabel label = classify_region(p).label;
    const double cs = c_star(p.c1(), p.c2());
    if (label == RegionLabel::IIIe && meta < 40 && p.beta() - cs > 2e-4) {
      const double need = escape_shock(p, Fraction(cs)).minimal_shock;
      ASSERT_LT(after_shock(p, cs, need - 1e-4), p.beta());
      ASSERT_GT(after_shock(p, cs, need + 1e-4), p.beta());
      ++meta;
    } else if (label == RegionLabel::III0 && stable < 40 && p.beta() < 0.9) {
      const double need = escape_shock(p, Fraction(0.0)).minimal_shock;
      ASSERT_LT(after_shock(p, 0.0, need - 1e-4), p.beta());
      ASSERT_GT(after_shock(p, 0.0, need + 1e-4), p.beta());
      ++stable;
    }
  }
}

TEST(Escape, FromCstarShrinksAsEnthusiasmRises) {
  const ModelParams base(0.96, 0.06, 1.0, 69.0776);
  double prev = INFINITY;
  int seen = 0;
  for (double c1 = 2.0; c1 < 6.0; c1 += 0.05) {
    const ModelParams p(base.alpha(), base.beta(), c1, base.c2());
    if (classify_region(p).label != RegionLabel::IIIe) continue;
    const double need = escape_shock(p, Fraction(c_star(c1, p.c2()))).minimal_shock;
    EXPECT_LT(need, prev);
    prev = need;
    ++seen;
  }
  EXPECT_GT(seen, 10);
}

TEST(CstarStudy, TunisiaEnthusiasmSweep) {
  const ModelParams base(0.96, 0.06, 1.0, 69.0776);
  const double c1s[] = {2.30, 3.26, 4.02, 4.80};
  const auto rows = rising_cstar_study(base, c1s);
  ASSERT_EQ(rows.size(), 4u);
  const RegionLabel labels[] = {RegionLabel::III0, RegionLabel::IIIe, RegionLabel::IIIe,
                                RegionLabel::III1};
  const double cstars[] = {0.0322, 0.0451, 0.0550, 0.0650};
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(rows[k].region.label, labels[k]);
    EXPECT_NEAR(rows[k].c_star, cstars[k], 5e-4);
    EXPECT_EQ(rows[k].escape_from_cstar.has_value(), labels[k] == RegionLabel::IIIe);
  }
  EXPECT_NEAR(rows[2].escape_from_cstar->minimal_shock, 0.0050, 5e-4);
  EXPECT_EQ(rows[2].escape_from_cstar->attainment, Attainment::Closed);
  // The second Tunisia shock of 0.01 is enough from that plateau.
  EXPECT_GT(after_shock(ModelParams(0.96, 0.06, 4.02, 69.0776), rows[2].c_star, 0.01), 0.9);
}

TEST(CstarStudy, RejectsUnorderedRates) {
  const ModelParams base(0.96, 0.06, 1.0, 69.0776);
  const double bad[] = {3.0, 2.0};
  EXPECT_THROW(rising_cstar_study(base, bad), ValidationError);
  const double zero[] = {0.0, 2.0};
  EXPECT_THROW(rising_cstar_study(base, zero), ValidationError);
}

TEST(Presets, LandInTheirRegions) {
  const auto presets = case_study_presets();
  EXPECT_EQ(presets.size(), 3u);
  for (const auto& p : presets) {
    EXPECT_EQ(classify_region(p.params).label, p.expected) << p.name;
    EXPECT_FALSE(p.description.empty());
  }
}
