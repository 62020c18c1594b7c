#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "lucas/modmath.hpp"

namespace lucas {

// All bulk loops run over fixed-width chunks aligned to absolute index
// boundaries, and reductions fold the per-chunk partials in ascending chunk
// order. Floating-point results are therefore bit-identical for every
// worker count; the thread count only changes who computes which chunk.
inline constexpr u64 kChunkWidth = u64(1) << 16;

inline unsigned default_threads() {
  if (const char* env = std::getenv("LUCASRANK_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 4096) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

inline unsigned resolve_threads(unsigned requested) {
  return requested ? requested : default_threads();
}

inline u64 chunk_count(u64 begin, u64 end) {
  if (begin >= end) return 0;
  return (end - 1) / kChunkWidth - begin / kChunkWidth + 1;
}

// Runs fn(chunk_index, lo, hi) for every chunk intersecting [begin, end);
// chunk_index counts from 0 within this call. Workers pick chunks off an
// atomic counter; the first exception wins and is rethrown after join.
template <class Fn>
void for_chunks(u64 begin, u64 end, unsigned threads, Fn&& fn) {
  const u64 nchunks = chunk_count(begin, end);
  if (nchunks == 0) return;
  const u64 first = begin / kChunkWidth;
  const auto run_one = [&](u64 c) {
    const u64 lo = std::max(begin, (first + c) * kChunkWidth);
    const u64 hi = std::min(end, (first + c + 1) * kChunkWidth);
    fn(c, lo, hi);
  };
  const unsigned nthreads =
      static_cast<unsigned>(std::min<u64>(resolve_threads(threads), nchunks));
  if (nthreads <= 1) {
    for (u64 c = 0; c < nchunks; ++c) run_one(c);
    return;
  }
  std::atomic<u64> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (u64 c = next.fetch_add(1); c < nchunks; c = next.fetch_add(1)) {
      if (failed.load(std::memory_order_relaxed)) return;
      try {
        run_one(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Per-chunk partials of type Acc, in ascending chunk order.
// fn(lo, hi) -> Acc.
template <class Acc, class Fn>
std::vector<Acc> map_chunks(u64 begin, u64 end, unsigned threads, Fn&& fn) {
  std::vector<Acc> partials(chunk_count(begin, end));
  for_chunks(begin, end, threads,
             [&](u64 c, u64 lo, u64 hi) { partials[c] = fn(lo, hi); });
  return partials;
}

// Compensated accumulator; used for every floating-point reduction so the
// fold is well-conditioned as well as deterministic.
struct KahanSum {
  double s = 0.0;
  double c = 0.0;

  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }

  double value() const { return s; }
};

// Deterministic sum of term(n) for n in [begin, end).
template <class Term>
double chunked_sum(u64 begin, u64 end, unsigned threads, Term&& term) {
  const auto partials =
      map_chunks<double>(begin, end, threads, [&](u64 lo, u64 hi) {
        KahanSum ks;
        for (u64 n = lo; n < hi; ++n) ks.add(term(n));
        return ks.value();
      });
  KahanSum total;
  for (double v : partials) total.add(v);
  return total.value();
}

// Deterministic count of pred(n) over [begin, end).
template <class Pred>
u64 chunked_count(u64 begin, u64 end, unsigned threads, Pred&& pred) {
  const auto partials = map_chunks<u64>(begin, end, threads, [&](u64 lo, u64 hi) {
    u64 c = 0;
    for (u64 n = lo; n < hi; ++n) c += pred(n) ? 1 : 0;
    return c;
  });
  u64 total = 0;
  for (u64 v : partials) total += v;
  return total;
}

}  // namespace lucas
