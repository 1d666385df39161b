#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace unirank {

// Worker count: explicit request wins, then the UNIMODAL_THREADS environment
// variable, then hardware concurrency. Always at least 1.
inline unsigned resolve_threads(long requested = 0) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("UNIMODAL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Runs fn(i) for i in [0, count). Work is partitioned by stride so each index
// is handled exactly once; fn writes only to its own slot.
template <class Fn>
void parallel_for(long count, unsigned threads, Fn&& fn) {
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned nt = std::min<unsigned>(threads, static_cast<unsigned>(count));
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&fn, t, nt, count] {
      for (long i = static_cast<long>(t); i < count; i += static_cast<long>(nt)) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace unirank
