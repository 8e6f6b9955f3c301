#pragma once

// Minimal worker pool helpers. Work items write to disjoint outputs, so the
// results never depend on the number of threads.

#include <Eigen/Core>

#include <cstddef>
#include <functional>

namespace surfns {

/// Thread count used by parallel_for; 0 restores the default (SURFNS_THREADS
/// or the hardware concurrency).
void set_thread_count(int n);
int thread_count();

/// Runs f(i) for i in [0, n) on up to thread_count() threads. The first
/// exception thrown by any item is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

/// X^T diag(w) Y evaluated in fixed column blocks spread over the pool; the
/// block size is fixed so the result is bit-identical for any thread count.
Eigen::MatrixXd blocked_gram(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, const Eigen::MatrixXd& Y);

}  // namespace surfns
