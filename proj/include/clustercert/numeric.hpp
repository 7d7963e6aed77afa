#pragma once

#include <cmath>
#include <cstddef>

namespace clustercert {

/// Neumaier-compensated accumulator. Order-sensitive summation error is the
/// enemy of the 1e-12 cross-path agreement contracts, so every reduction that
/// feeds a reported seminorm goes through one of these.
class NeumaierSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double result() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Effective worker count: explicit request wins, then CLUSTERCERT_WORKERS,
/// then hardware concurrency clamped to [1, 8].
int resolve_worker_count(int requested);

}  // namespace clustercert
