#include "surfns/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace surfns {

namespace {

std::atomic<int> g_threads{0};

int default_threads() {
  if (const char* env = std::getenv("SURFNS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

void set_thread_count(int n) { g_threads = std::max(0, n); }

int thread_count() {
  const int n = g_threads.load();
  return n > 0 ? n : default_threads();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(thread_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex guard;
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!first) first = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

Eigen::MatrixXd blocked_gram(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, const Eigen::MatrixXd& Y) {
  constexpr Eigen::Index block = 32;
  Eigen::MatrixXd out(X.cols(), Y.cols());
  const Eigen::MatrixXd wx = w.asDiagonal() * X;
  const std::size_t nblocks = static_cast<std::size_t>((Y.cols() + block - 1) / block);
  parallel_for(nblocks, [&](std::size_t b) {
    const Eigen::Index c0 = static_cast<Eigen::Index>(b) * block;
    const Eigen::Index nc = std::min(block, Y.cols() - c0);
    out.middleCols(c0, nc).noalias() = wx.transpose() * Y.middleCols(c0, nc);
  });
  return out;
}

}  // namespace surfns
