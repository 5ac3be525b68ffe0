#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "friedland/actions.hpp"
#include "friedland/kernels.hpp"
#include "friedland/orbit_space.hpp"
#include "friedland/spaces.hpp"

using Clock = std::chrono::steady_clock;

static double run_ms(const std::function<void()>& fn) {
  auto t0 = Clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
  CLI::App app{"Timing of the separated-set kernels against the serial reference"};
  int n = 6;
  double eps = 0.05;
  long grid = 142;
  long budget = 300000;
  std::vector<long> L{2, 3};
  app.add_option("--n", n, "orbit length");
  app.add_option("--eps", eps, "separation scale");
  app.add_option("--grid", grid, "grid points per axis");
  app.add_option("--budget", budget, "candidate budget");
  app.add_option("--L", L, "circle multipliers");
  CLI11_PARSE(app, argc, argv);

  using namespace friedland;
  using namespace friedland::kernels;
  try {
    Action T = circle_linear_action(L);
    const int depth = n + depth_for_epsilon(eps);
    CandidateSet pool = enumerate_candidates_padded(T, depth, 1.0 / grid,
                                                    static_cast<std::size_t>(budget));
    std::vector<std::uint32_t> order = lexicographic_order(pool);
    std::cout << "pool " << pool.size() << " candidates, depth " << depth << ", n " << n
              << ", eps " << eps << "\n";

    std::vector<std::uint32_t> ref, fast_serial, fast_parallel;
    double t_ref = run_ms([&] { ref = greedy_separated_reference(pool, order, n, eps); });
    double t_fast = run_ms([&] {
      fast_serial = greedy_separated_fast(pool, order, n, eps, false);
    });
    double t_par = run_ms([&] {
      fast_parallel = greedy_separated_fast(pool, order, n, eps, true);
    });

    std::cout << "reference      " << t_ref << " ms, count " << ref.size() << "\n";
    std::cout << "fast serial    " << t_fast << " ms, count " << fast_serial.size() << "\n";
    std::cout << "fast parallel  " << t_par << " ms, count " << fast_parallel.size() << "\n";

    const bool agree = ref == fast_serial && ref == fast_parallel;
    std::cout << "results identical: " << (agree ? "yes" : "NO") << "\n";
    return agree ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
