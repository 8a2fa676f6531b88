#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "tcentroid/errors.hpp"
#include "tcentroid/parallel.hpp"
#include "tcentroid/verification.hpp"

namespace {

using namespace tcentroid;
using namespace tcentroid::verification;

bool same_records(const std::vector<CheckRecord>& a, const std::vector<CheckRecord>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const CheckRecord& x = a[i];
        const CheckRecord& y = b[i];
        if (x.check != y.check || x.x1 != y.x1 || x.x2 != y.x2 || x.h != y.h || x.lhs != y.lhs ||
            x.rhs != y.rhs || x.margin != y.margin) {
            return false;
        }
    }
    return true;
}

void expect_identical(const VerificationReport& a, const VerificationReport& b) {
    EXPECT_EQ(a.checks_run, b.checks_run);
    EXPECT_EQ(a.min_margin, b.min_margin);
    EXPECT_TRUE(same_records(a.violations, b.violations));
    EXPECT_TRUE(same_records(a.untestable, b.untestable));
    EXPECT_TRUE(same_records(a.tightest, b.tightest));
}

std::string csv(const VerificationReport& r) {
    std::ostringstream out;
    write_report_csv(out, r);
    return out.str();
}

class ParallelSweeps : public ::testing::Test {
protected:
    void SetUp() override { omp_set_num_threads(4); }
};

TEST(Range, CountAndPoints) {
    const Range r{-8.0, 8.0, 0.05};
    EXPECT_EQ(r.count(), 321u);
    EXPECT_EQ(r.at(0), -8.0);
    EXPECT_EQ(r.at(160), 0.0);
    EXPECT_EQ(r.at(320), 8.0);
    EXPECT_EQ((Range{-3.0, 3.0, 0.1}).count(), 61u);
    EXPECT_EQ((Range{0.0, 1.0, 0.3}).count(), 4u);
    EXPECT_DOUBLE_EQ((Range{0.0, 1.0, 0.3}).at(3), 0.9);
}

TEST(SweepSpec, Validation) {
    SweepSpec bad = omega_grid_spec();
    bad.l_range.step = 0.0;
    EXPECT_THROW(validate(bad), ParameterError);
    bad = omega_grid_spec();
    bad.u_range = {1.0, 1.0, 0.1};
    EXPECT_THROW(validate(bad), ParameterError);
    bad = theorem_random_spec(0, 1);
    EXPECT_THROW(validate(bad), ParameterError);
    bad = omega_grid_spec();
    bad.l_range.max = std::nan("");
    EXPECT_THROW(validate(bad), DomainError);
}

TEST(DefaultSweeps, MonotonicityGrid) {
    const VerificationReport r = verify_monotonicity(monotonicity_grid_spec());
    EXPECT_TRUE(r.passed());
    EXPECT_GT(r.min_margin, 0.0);
    // 190 ordered pairs from 21 grid values, 60 h steps, plus 60 nonzero shifts
    EXPECT_EQ(r.checks_run, 210u * 120u);
}

TEST(DefaultSweeps, TheoremRandom) {
    const VerificationReport r = verify_monotonicity(theorem_random_spec(2000, 77));
    EXPECT_TRUE(r.passed());
    EXPECT_GT(r.min_margin, 0.0);
    EXPECT_EQ(r.checks_run, 6000u);
}

TEST(DefaultSweeps, OmegaPositive) {
    const VerificationReport r = verify_omega_positive(omega_grid_spec());
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.checks_run, 321u * 321u);
    EXPECT_GT(r.min_margin, 0.0);
    ASSERT_EQ(r.tightest.size(), 1u);
    EXPECT_EQ(r.tightest[0].check, "omega_positive");
}

TEST(DefaultSweeps, Bounds) {
    const VerificationReport r = verify_bounds(bounds_grid_spec());
    EXPECT_TRUE(r.passed());
    EXPECT_TRUE(r.untestable.empty());
    EXPECT_EQ(r.tightest.size(), 6u);
    EXPECT_EQ(r.checks_run, 1601u * 5u + 1601u * 321u);
}

TEST(DefaultSweeps, Derivative) {
    const VerificationReport r = verify_derivative(derivative_grid_spec());
    EXPECT_TRUE(r.passed());
    EXPECT_GE(r.checks_run, 2000u * 2u);
}

TEST(DefaultSweeps, OracleEquivalenceWithRescalings) {
    SweepSpec spec = derivative_grid_spec();
    spec.n_random = 100;
    spec.seed = 3;
    const VerificationReport r = verify_oracle_equivalence(spec);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.checks_run, 2025u + 100u);
}

TEST(DefaultSweeps, Equivariance) {
    SweepSpec spec = theorem_random_spec(300, 9);
    spec.h_range = {-3.0, 3.0, 1.0};
    const VerificationReport r = verify_equivariance(spec);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.checks_run, 600u);
}

TEST(Report, ViolationsAreCollectedNotThrown) {
    // Far outside the default grids the central difference drowns in
    // rounding (Psi near 200, Psi' near 1/200^2), so the check fails.
    SweepSpec spec = derivative_grid_spec();
    spec.l_range = {-300.0, -299.0, 1.0};
    spec.u_range = {200.0, 201.0, 1.0};
    spec.h_range = {0.0, 1.0, 1.0};
    const VerificationReport r = verify_derivative(spec);
    EXPECT_FALSE(r.passed());
    EXPECT_LT(r.min_margin, 0.0);
    for (const CheckRecord& v : r.violations) {
        EXPECT_EQ(v.check, "finite_difference");
    }
    const std::string text = csv(r);
    EXPECT_NE(text.find("\nfinite_difference,"), std::string::npos);
}

TEST(Report, UntestableMarginsAreSetAside) {
    // Both sides of the summed form underflow to zero far out.
    SweepSpec spec = bounds_grid_spec();
    spec.l_range = {40.0, 41.0, 1.0};
    spec.u_range = {-41.0, -40.0, 1.0};
    const VerificationReport r = verify_bounds(spec);
    EXPECT_FALSE(r.untestable.empty());
    EXPECT_NE(csv(r).find("/untestable,"), std::string::npos);
}

TEST(Report, Deterministic) {
    const VerificationReport a = verify_monotonicity(theorem_random_spec(500, 5));
    const VerificationReport b = verify_monotonicity(theorem_random_spec(500, 5));
    expect_identical(a, b);
    EXPECT_EQ(csv(a), csv(b));
    const VerificationReport c = verify_monotonicity(theorem_random_spec(500, 6));
    EXPECT_NE(csv(a), csv(c));
}

TEST(Report, CsvLayout) {
    const VerificationReport r = verify_omega_positive(omega_grid_spec());
    const std::string text = csv(r);
    EXPECT_EQ(text.rfind("check,x1,x2,h,lhs,rhs,margin\n", 0), 0u);
    EXPECT_NE(text.find("omega_positive/min_margin,8,-8,0,"), std::string::npos);
    EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(Report, CombineSumsChecks) {
    const VerificationReport a = verify_omega_positive(omega_grid_spec());
    const VerificationReport b = verify_bounds(bounds_grid_spec());
    const VerificationReport all = combine({a, b});
    EXPECT_EQ(all.checks_run, a.checks_run + b.checks_run);
    EXPECT_EQ(all.tightest.size(), a.tightest.size() + b.tightest.size());
    EXPECT_EQ(all.min_margin, std::min(a.min_margin, b.min_margin));
}

TEST_F(ParallelSweeps, MatchSerialExactly) {
    SweepSpec oracle = derivative_grid_spec();
    oracle.n_random = 50;
    oracle.seed = 12;
    SweepSpec equiv = theorem_random_spec(400, 4);
    equiv.h_range = {-3.0, 3.0, 1.0};
    expect_identical(verify_monotonicity(monotonicity_grid_spec(), Execution::serial),
                     verify_monotonicity(monotonicity_grid_spec(), Execution::parallel));
    expect_identical(verify_monotonicity(theorem_random_spec(3000, 1), Execution::serial),
                     verify_monotonicity(theorem_random_spec(3000, 1), Execution::parallel));
    expect_identical(verify_omega_positive(omega_grid_spec(), Execution::serial),
                     verify_omega_positive(omega_grid_spec(), Execution::parallel));
    expect_identical(verify_bounds(bounds_grid_spec(), Execution::serial),
                     verify_bounds(bounds_grid_spec(), Execution::parallel));
    expect_identical(verify_derivative(derivative_grid_spec(), Execution::serial),
                     verify_derivative(derivative_grid_spec(), Execution::parallel));
    expect_identical(verify_oracle_equivalence(oracle, Execution::serial),
                     verify_oracle_equivalence(oracle, Execution::parallel));
    expect_identical(verify_equivariance(equiv, Execution::serial),
                     verify_equivariance(equiv, Execution::parallel));
}

TEST(ThreadLimit, EnvironmentCap) {
    ASSERT_EQ(setenv(kThreadsEnvVar, "1", 1), 0);
    EXPECT_EQ(thread_limit(), 1);
    for (const char* bad : {"0", "-2", "two", "3x"}) {
        ASSERT_EQ(setenv(kThreadsEnvVar, bad, 1), 0);
        EXPECT_THROW(thread_limit(), ParameterError) << bad;
    }
    ASSERT_EQ(unsetenv(kThreadsEnvVar), 0);
    EXPECT_GE(thread_limit(), 1);
}

}  // namespace
