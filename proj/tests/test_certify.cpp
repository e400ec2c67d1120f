#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "shiftapprox/certify.hpp"
#include "shiftapprox/errors.hpp"

using namespace shiftapprox;

namespace {

KernelSpec modified(const KernelSpec& base, int n, std::function<Complex(Frequency, Complex)> edit) {
  return KernelSpec::custom([base, edit](Frequency k) { return edit(k, coeff(base, k)); },
                            global_envelope(base, 4 * n), "modified");
}

bool any_failed(const ConditionReport& r, std::string_view id) {
  for (const auto* item : r.find(id)) {
    if (item->verdict == Verdict::Fail) return true;
  }
  return false;
}

}  // namespace

TEST(Certify, ClassifyEncoding) {
  EXPECT_EQ(classify(1.0, 0.5), Verdict::Pass);
  EXPECT_EQ(classify(-1.0, 0.5), Verdict::Fail);
  EXPECT_EQ(classify(0.2, 0.5), Verdict::Inconclusive);
  EXPECT_EQ(classify(0.0, 0.0), Verdict::Inconclusive);
}

TEST(Certify, Theorem1Dirichlet) {
  for (int n = 1; n <= 6; ++n) {
    for (int r = 1; r <= 3; ++r) {
      EXPECT_TRUE(check_theorem1(KernelSpec::dirichlet(n - 1), n, n, r).passed()) << n << r;
    }
  }
}

TEST(Certify, Theorem1BSplineWithEnoughSmoothness) {
  for (int n = 2; n <= 6; ++n) {
    for (int r = 1; r <= 3; ++r) {
      for (int mu = r - 1; mu <= r + 1; ++mu) {
        for (int m = 1; m <= n; ++m) {
          EXPECT_TRUE(check_theorem1(KernelSpec::bspline(n, mu), n, m, r).passed())
              << n << ' ' << mu << ' ' << m << ' ' << r;
        }
      }
    }
  }
}

TEST(Certify, Theorem1BoxSplineFailsForSmoothClass) {
  const ConditionReport rep = check_theorem1(KernelSpec::bspline(4, 0), 4, 4, 3);
  EXPECT_EQ(rep.overall, Verdict::Fail);
  EXPECT_TRUE(any_failed(rep, "signed_sum"));
}

TEST(Certify, Corollary1WithoutMean) {
  const auto base = KernelSpec::bspline(4, 2);
  const auto no_mean = modified(base, 4, [](Frequency k, Complex c) { return k == 0 ? Complex{} : c; });
  const ConditionReport th1 = check_theorem1(no_mean, 4, 4, 2);
  EXPECT_EQ(th1.overall, Verdict::Fail);
  bool zero_item_failed = false;
  for (const auto* item : th1.find("coeff_nonzero")) {
    if (item->l == 0 && item->verdict == Verdict::Fail) zero_item_failed = true;
  }
  EXPECT_TRUE(zero_item_failed);
  EXPECT_TRUE(check_corollary1(no_mean, 4, 4, 2).passed());
  EXPECT_TRUE(check_corollary1(base, 4, 4, 2).passed());
  EXPECT_TRUE(check_corollary1(KernelSpec::dirichlet(3), 4, 4, 2).passed());
}

TEST(Certify, Theorem2Families) {
  for (int n = 2; n <= 7; ++n) {
    for (int r = 1; r <= 3; ++r) {
      EXPECT_TRUE(check_theorem2(KernelSpec::dirichlet(n - 1), n, n - 1, r).passed());
      EXPECT_TRUE(check_theorem2(KernelSpec::bspline(n, r + 1), n, n - 1, r).passed());
      EXPECT_TRUE(check_theorem2(KernelSpec::shifted_bspline(n, r), n, n - 1, r).passed());
    }
  }
}

TEST(Certify, Theorem3Families) {
  for (int n = 2; n <= 7; ++n) {
    EXPECT_TRUE(check_theorem3(KernelSpec::dirichlet(n - 1), n, n, 2).passed());
    EXPECT_TRUE(check_theorem3(KernelSpec::bspline(n, 2), n, n, 2).passed());
  }
}

TEST(Certify, Theorem3FailsWithInsertedMultiple) {
  const int n = 4;
  const auto spoiled = modified(KernelSpec::bspline(n, 2), n, [n](Frequency k, Complex c) {
    return (k == 2 * n || k == -2 * n) ? Complex(0.05) : c;
  });
  const ConditionReport rep = check_theorem3(spoiled, n, n, 2);
  EXPECT_EQ(rep.overall, Verdict::Fail);
  EXPECT_TRUE(any_failed(rep, "c_2nv_zero"));
}

TEST(Certify, Theorem4Families) {
  for (int m = 1; m <= 3; ++m) {
    const int n = 2 * m + 1;
    EXPECT_TRUE(check_theorem4(KernelSpec::dirichlet(n - 1), n, m, 1).passed());
    EXPECT_TRUE(check_theorem4(KernelSpec::bspline(n, 3), n, m, 2).passed());
  }
}

TEST(Certify, SufficientDecay) {
  EXPECT_TRUE(check_sufficient_decay(KernelSpec::bspline(6, 2), 6, 6, 3).passed());
  EXPECT_TRUE(check_sufficient_decay(KernelSpec::weighted(6, 2, PoissonWeight{0.3}), 6, 6, 3).passed());
  const ConditionReport rep = check_sufficient_decay(KernelSpec::bspline(6, 1), 6, 6, 3);
  EXPECT_EQ(rep.overall, Verdict::Fail);
  bool top_failed = false;
  for (const auto& item : rep.items) {
    if (item.l && std::abs(*item.l) == 5 && item.verdict == Verdict::Fail) top_failed = true;
  }
  EXPECT_TRUE(top_failed);
}

TEST(Certify, DecayImpliesSignedSums) {
  const KernelSpec menu[] = {KernelSpec::bspline(5, 2), KernelSpec::shifted_bspline(5, 3),
                             KernelSpec::weighted(5, 2, PoissonWeight{0.5}),
                             KernelSpec::weighted(5, 2, HeatWeight{0.1}),
                             KernelSpec::weighted(5, 3, BernoulliWeight{1.0, 0.0})};
  for (const auto& k : menu) {
    for (int m = 1; m <= 5; ++m) {
      if (!check_sufficient_decay(k, 5, m, 2).passed()) continue;
      for (const auto* item : check_theorem1(k, 5, m, 2).find("signed_sum")) {
        EXPECT_EQ(item->verdict, Verdict::Pass) << k.describe() << " m=" << m;
      }
    }
  }
}

TEST(Certify, ScalingInvariance) {
  const auto base = KernelSpec::bspline(5, 2);
  const auto scaled = KernelSpec::custom([base](Frequency k) { return 3.0 * coeff(base, k); },
                                         DecayBound{3.0 * global_envelope(base, 20)->scale,
                                                    global_envelope(base, 20)->exponent});
  for (int m = 1; m <= 5; ++m) {
    EXPECT_EQ(check_theorem1(base, 5, m, 2).overall, check_theorem1(scaled, 5, m, 2).overall);
    EXPECT_EQ(check_theorem1(base, 5, m, 3).overall, check_theorem1(scaled, 5, m, 3).overall);
  }
}

TEST(Certify, PassingIsStableUnderLargerCutoff) {
  for (int mu = 1; mu <= 3; ++mu) {
    const auto k = KernelSpec::bspline(4, mu);
    for (Frequency K : {64, 128, 256}) {
      if (check_theorem1(k, 4, 4, 2, {K}).passed()) {
        EXPECT_TRUE(check_theorem1(k, 4, 4, 2, {2 * K}).passed());
      }
    }
  }
}

TEST(Certify, DispatchByName) {
  const auto k = KernelSpec::bspline(8, 3);
  EXPECT_EQ(check_by_name("2", k, 8, 7, 2).theorem, check_theorem2(k, 8, 7, 2).theorem);
  EXPECT_THROW(check_by_name("7", k, 8, 7, 2), std::invalid_argument);
}

TEST(Certify, CsvAndJson) {
  const ConditionReport rep = check_theorem2(KernelSpec::bspline(4, 2), 4, 3, 1);
  std::ostringstream os;
  write_csv(os, rep);
  EXPECT_EQ(os.str().rfind("theorem,l,id,margin,slack,verdict\n", 0), 0u);
  const std::string json = to_json(rep);
  EXPECT_NE(json.find("\"overall\""), std::string::npos);
}

TEST(Jackson, WitnessesAttainBound) {
  const int n = 6;
  const ShiftSpaceSpec sym0{KernelSpec::bspline(n, 2), n, SpaceVariant::Sym0, n - 1};
  const ShiftSpaceSpec sym1{KernelSpec::bspline(n, 2), n, SpaceVariant::Sym1, n};
  const ShiftSpaceSpec sym2{KernelSpec::bspline(7, 2), 7, SpaceVariant::Sym2, 3};
  const std::pair<ShiftSpaceSpec, ClassVariant> cases[] = {
      {sym0, ClassVariant::H0}, {sym1, ClassVariant::H1}, {sym2, ClassVariant::H2}};
  for (const auto& [space, cls] : cases) {
    EXPECT_EQ(jackson_class(space), cls);
    const JacksonReport rep = verify_jackson(space, {cls, 2}, {}, 1024);
    EXPECT_TRUE(rep.witness_equal) << to_string(space.variant);
    EXPECT_NEAR(rep.witness.error, rep.witness.rhs, 1e-10 * rep.witness.rhs);
  }
}

TEST(Jackson, RandomSamplesRespectBound) {
  std::mt19937_64 rng(11);
  const ShiftSpaceSpec space{KernelSpec::bspline(5, 2), 5, SpaceVariant::Sym0, 4};
  std::vector<TruncatedSpectrum> samples;
  for (int i = 0; i < 100; ++i) samples.push_back(random_class_sample(ClassVariant::H0, 20, rng));
  const JacksonReport rep = verify_jackson(space, {ClassVariant::H0, 2}, samples, 512);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_TRUE(rep.ok());
  EXPECT_DOUBLE_EQ(rep.bound, 1.0 / 25);
}

TEST(Jackson, RejectsSampleOutsideClass) {
  const ShiftSpaceSpec space{KernelSpec::bspline(5, 2), 5, SpaceVariant::Sym0, 4};
  const auto cosine = TruncatedSpectrum::trigonometric({{1, 0.5}, {-1, 0.5}});
  EXPECT_THROW(verify_jackson(space, {ClassVariant::H0, 1}, {cosine}, 256), SampleOutsideClass);
}

TEST(Jackson, SamplesCarryClassSymmetry) {
  std::mt19937_64 rng(3);
  for (auto cls : {ClassVariant::H0, ClassVariant::H1, ClassVariant::H2, ClassVariant::H2Even}) {
    for (int i = 0; i < 10; ++i) {
      EXPECT_TRUE(belongs_to_class(random_class_sample(cls, 15, rng), cls));
    }
  }
}

TEST(Corollaries, RefinedBoundNeverWorse) {
  std::mt19937_64 rng(5);
  for (int theorem : {2, 3, 4}) {
    for (int r : {1, 2}) {
      const ClassVariant cls = theorem == 2 ? ClassVariant::H0
                               : theorem == 3 ? ClassVariant::H1 : ClassVariant::H2;
      const int n = 7;
      const int m = theorem == 2 ? n - 1 : theorem == 3 ? n : 3;
      std::vector<TruncatedSpectrum> samples;
      for (int i = 0; i < 20; ++i) samples.push_back(random_class_sample(cls, 25, rng));
      const CorollaryReport rep =
          verify_corollaries_234(KernelSpec::bspline(n, r + 1), theorem, n, m, r, samples);
      EXPECT_TRUE(rep.ok()) << theorem << ' ' << r;
      EXPECT_TRUE(rep.identity_holds);
      for (const auto& row : rep.rows) {
        EXPECT_TRUE(row.refined_not_worse);
        EXPECT_LE(row.refined_rhs, row.unrefined_rhs * (1 + 1e-12));
      }
    }
  }
}

TEST(Corollaries, DerivedSpaces) {
  const auto k = KernelSpec::bspline(7, 3);
  EXPECT_EQ(verify_corollaries_234(k, 2, 7, 6, 2, {}).derived.variant, SpaceVariant::Sym0);
  EXPECT_EQ(verify_corollaries_234(k, 2, 7, 6, 1, {}).derived.variant, SpaceVariant::EvenParts);
  EXPECT_EQ(verify_corollaries_234(k, 3, 7, 7, 1, {}).derived.variant, SpaceVariant::Sym0);
  EXPECT_EQ(verify_corollaries_234(k, 4, 7, 3, 1, {}).derived.variant, SpaceVariant::Sym2Even);
}

TEST(Corollaries, NeedsDecayOfDerivative) {
  EXPECT_THROW(verify_corollaries_234(KernelSpec::bspline(6, 1), 2, 6, 5, 2, {}), InsufficientDecay);
}
