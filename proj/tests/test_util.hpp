#pragma once

// Minimal test harness: named cases, always-on checks, one line per case.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace testutil {

struct Case {
  std::string name;
  std::function<void()> run;
};

inline std::vector<Case>& registry() {
  static std::vector<Case> cases;
  return cases;
}

struct Register {
  Register(std::string name, std::function<void()> fn) {
    registry().push_back({std::move(name), std::move(fn)});
  }
};

inline int fail_count = 0;

#define TEST_CASE(name)                                                      \
  static void test_fn_##name();                                             \
  static ::testutil::Register reg_##name(#name, test_fn_##name);            \
  static void test_fn_##name()

#define REQUIRE(cond)                                                        \
  do {                                                                       \
    if (!(cond)) {                                                           \
      std::cerr << "    [FAIL] " << __FILE__ << ":" << __LINE__ << "  "      \
                << #cond << "\n";                                            \
      ++::testutil::fail_count;                                              \
      return;                                                                \
    }                                                                        \
  } while (0)

#define REQUIRE_MSG(cond, msg)                                               \
  do {                                                                       \
    if (!(cond)) {                                                           \
      std::cerr << "    [FAIL] " << __FILE__ << ":" << __LINE__ << "  "      \
                << #cond << "  (" << msg << ")\n";                           \
      ++::testutil::fail_count;                                              \
      return;                                                                \
    }                                                                        \
  } while (0)

#define REQUIRE_CLOSE(a, b, tol)                                             \
  do {                                                                       \
    double va = (a), vb = (b);                                               \
    if (!(std::abs(va - vb) <= (tol))) {                                     \
      std::cerr << "    [FAIL] " << __FILE__ << ":" << __LINE__ << "  |"     \
                << #a << " - " << #b << "| = " << std::abs(va - vb)          \
                << " > " << (tol) << "  (" << va << " vs " << vb << ")\n";   \
      ++::testutil::fail_count;                                              \
      return;                                                                \
    }                                                                        \
  } while (0)

#define REQUIRE_THROWS(expr)                                                 \
  do {                                                                       \
    bool thrown = false;                                                     \
    try {                                                                    \
      (void)(expr);                                                          \
    } catch (const std::exception&) {                                        \
      thrown = true;                                                         \
    }                                                                        \
    if (!thrown) {                                                           \
      std::cerr << "    [FAIL] " << __FILE__ << ":" << __LINE__              \
                << "  expected exception from " << #expr << "\n";            \
      ++::testutil::fail_count;                                              \
      return;                                                                \
    }                                                                        \
  } while (0)

inline int run_all() {
  int failed_cases = 0;
  for (const auto& c : registry()) {
    int before = fail_count;
    try {
      c.run();
    } catch (const std::exception& e) {
      std::cerr << "    [FAIL] unexpected exception: " << e.what() << "\n";
      ++fail_count;
    }
    bool ok = (fail_count == before);
    std::cout << (ok ? "[ ok ] " : "[FAIL] ") << c.name << "\n";
    if (!ok) ++failed_cases;
  }
  if (failed_cases > 0) {
    std::cout << failed_cases << " of " << registry().size() << " cases failed\n";
    return 1;
  }
  std::cout << "all " << registry().size() << " cases passed\n";
  return 0;
}

}  // namespace testutil

#define TEST_MAIN() \
  int main() { return ::testutil::run_all(); }
