#pragma once

// Shared driver for the verification sweeps: a serial reference loop and an
// OpenMP loop over the same point function. Both feed per-thread
// accumulators whose merge is order independent, so the two paths produce
// identical reports.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <iterator>
#include <limits>
#include <string_view>
#include <tuple>
#include <vector>

#include "tcentroid/parallel.hpp"
#include "tcentroid/verification.hpp"

namespace tcentroid::verification::detail {

inline bool canonical_less(const CheckRecord& a, const CheckRecord& b) {
    return std::tie(a.check, a.x1, a.x2, a.h, a.lhs, a.rhs) <
           std::tie(b.check, b.x1, b.x2, b.h, b.lhs, b.rhs);
}

// Smaller margin wins; ties go to the canonically smaller point.
inline bool tighter(const CheckRecord& a, const CheckRecord& b) {
    if (a.margin != b.margin) {
        return a.margin < b.margin;
    }
    return canonical_less(a, b);
}

class Accumulator {
public:
    void record(std::string_view check, double x1, double x2, double h, double lhs, double rhs) {
        const double margin = lhs - rhs;
        ++checks_;
        const auto make = [&] { return CheckRecord{std::string(check), x1, x2, h, lhs, rhs, margin}; };
        const bool untestable = std::fabs(margin) < kUntestableMargin;
        if (untestable) {
            untestable_.push_back(make());
        } else if (!(margin > 0.0)) {  // NaN lands here too
            violations_.push_back(make());
        }
        if (std::isnan(margin)) {
            return;
        }
        auto it = find_tightest(check);
        if (it == tightest_.end() || margin <= it->margin) {
            update_tightest(make());
        }
    }

    void merge(Accumulator&& other) {
        checks_ += other.checks_;
        std::move(other.violations_.begin(), other.violations_.end(), std::back_inserter(violations_));
        std::move(other.untestable_.begin(), other.untestable_.end(), std::back_inserter(untestable_));
        for (CheckRecord& rec : other.tightest_) {
            update_tightest(std::move(rec));
        }
    }

    VerificationReport finish() && {
        VerificationReport report;
        report.checks_run = checks_;
        std::sort(violations_.begin(), violations_.end(), canonical_less);
        std::sort(untestable_.begin(), untestable_.end(), canonical_less);
        std::sort(tightest_.begin(), tightest_.end(),
                  [](const CheckRecord& a, const CheckRecord& b) { return a.check < b.check; });
        report.min_margin = std::numeric_limits<double>::infinity();
        for (const CheckRecord& rec : tightest_) {
            report.min_margin = std::min(report.min_margin, rec.margin);
        }
        report.violations = std::move(violations_);
        report.untestable = std::move(untestable_);
        report.tightest = std::move(tightest_);
        return report;
    }

private:
    std::vector<CheckRecord>::iterator find_tightest(std::string_view check) {
        return std::find_if(tightest_.begin(), tightest_.end(),
                            [&](const CheckRecord& r) { return r.check == check; });
    }

    void update_tightest(CheckRecord rec) {
        auto it = find_tightest(rec.check);
        if (it == tightest_.end()) {
            tightest_.push_back(std::move(rec));
        } else if (tighter(rec, *it)) {
            *it = std::move(rec);
        }
    }

    std::size_t checks_ = 0;
    std::vector<CheckRecord> violations_;
    std::vector<CheckRecord> untestable_;
    std::vector<CheckRecord> tightest_;  // one per check name
};

/// Calls point(i, acc) for i in [0, n). If points throw, the exception of the
/// lowest index is rethrown after the loop, matching the serial behaviour.
template <class PointFn>
VerificationReport run_sweep(std::size_t n, Execution exec, const PointFn& point) {
    if (exec == Execution::serial) {
        Accumulator acc;
        for (std::size_t i = 0; i < n; ++i) {
            point(i, acc);
        }
        return std::move(acc).finish();
    }

    const int threads = thread_limit();
    std::vector<Accumulator> partial(static_cast<std::size_t>(threads));
    const auto count = static_cast<std::int64_t>(n);
    std::int64_t failed_at = count;
    std::exception_ptr failure;
#pragma omp parallel num_threads(threads)
    {
        Accumulator& acc = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < count; ++i) {
            try {
                point(static_cast<std::size_t>(i), acc);
            } catch (...) {
#pragma omp critical(tcentroid_sweep_failure)
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    Accumulator total;
    for (Accumulator& acc : partial) {
        total.merge(std::move(acc));
    }
    return std::move(total).finish();
}

}  // namespace tcentroid::verification::detail
