// Compares the OpenMP trial runner against the serial reference on the
// adversarial lower-bound family and checks that the reports agree.

#include "uncover/harness.hpp"
#include "uncover/instances.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <iostream>

using namespace uncover;

namespace {

double run_timed(const Instance& inst, const std::string& alg, const RunOptions& opts,
                 RunOutcome& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = run_trials(inst, alg, opts);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    long trials = 20000;
    if (argc > 1) trials = std::strtol(argv[1], nullptr, 10);
    Instance inst = gen_lb22(50, Rat(1, 2), Rat(1, 100));

    RunOptions opts;
    opts.trials = trials;
    opts.base_seed = 99;
    opts.with_opt = true;

    RunOutcome parallel_out, serial_out;
    opts.parallel = true;
    const double t_par = run_timed(inst, "disjoint", opts, parallel_out);
    opts.parallel = false;
    const double t_ser = run_timed(inst, "disjoint", opts, serial_out);

    std::cout << "trials: " << trials << "\n";
    std::cout << "serial:   " << t_ser << " s\n";
    std::cout << "parallel: " << t_par << " s  (speedup " << t_ser / t_par << "x)\n";
    const bool agree = parallel_out.aggregate == serial_out.aggregate;
    std::cout << "reports identical: " << (agree ? "yes" : "NO") << "\n";
    return agree ? 0 : 1;
}
