#include "amenable/parallel.hpp"

namespace amenable {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_worker_threads(unsigned n) { g_threads = n; }

unsigned worker_threads() {
    const unsigned n = g_threads.load();
    if (n) return n;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

}  // namespace amenable
