#include <gtube/parallel.hpp>

#include <atomic>
#include <cstdlib>
#include <string>

namespace gtube {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads = n; }

int thread_count() {
  if (const int n = g_threads.load(); n > 0) return n;
  if (const char* env = std::getenv("THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace gtube
