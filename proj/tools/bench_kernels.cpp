// Benchmark of the parallel quadrature kernels against the serial reference.
// The two paths must agree bitwise (panel sums are accumulated in a fixed
// order); this tool times both and fails loudly if any bit differs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "pball/core.hpp"
#include "pball/quadrature.hpp"

using namespace pball;

namespace {

double time_ms(const std::function<double()>& f, int reps, double& result) {
    // warm-up
    result = f();
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) result = f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

std::vector<Panel> dense_panels() {
    QuadratureRule rule;
    rule.breakpoints.clear();
    for (int i = 0; i <= 512; ++i) rule.breakpoints.push_back(8.0 * i / 512.0);
    return rule.panels();
}

} // namespace

int main() {
    const Dimension dim(5);
    const int n = dim.n();
    const auto integrand = [n](double r) {
        return stable_pow(r, n - 1.0) * stable_pow(1.0 + r * r, -static_cast<double>(n));
    };
    const auto panels = dense_panels();

    int failures = 0;
    std::printf("%-28s %12s %12s %8s  %s\n", "kernel", "serial[ms]", "parallel[ms]", "speedup",
                "bitwise");

    for (std::size_t pts : {64u, 128u, 256u}) {
        double serial_val = 0.0, parallel_val = 0.0;
        const double ts = time_ms([&] { return integrate_panels_serial(integrand, panels, pts); },
                                  5, serial_val);
        const double tp =
            time_ms([&] { return integrate_panels(integrand, panels, pts); }, 5, parallel_val);
        const bool same = serial_val == parallel_val;
        if (!same) ++failures;
        std::printf("%-22s pts=%-3zu %12.3f %12.3f %8.2f  %s\n", "bubble-mass", pts, ts, tp,
                    ts / tp, same ? "ok" : "MISMATCH");
    }

    // shifted-kernel identity integrand at tau = e1 (2-D composite quadrature)
    for (std::size_t pts : {64u, 96u}) {
        QuadratureRule rule;
        rule.points_per_panel = pts;
        double serial_val = 0.0, parallel_val = 0.0;
        threading::set_max_threads(1);
        const double ts = time_ms(
            [&] { return shifted_kernel_integral(dim, 1.0, n - 4.0, rule); }, 3, serial_val);
        threading::set_max_threads(0);
        const double tp = time_ms(
            [&] { return shifted_kernel_integral(dim, 1.0, n - 4.0, rule); }, 3, parallel_val);
        const bool same = serial_val == parallel_val;
        if (!same) ++failures;
        std::printf("%-22s pts=%-3zu %12.3f %12.3f %8.2f  %s\n", "shifted-kernel", pts, ts, tp,
                    ts / tp, same ? "ok" : "MISMATCH");
    }

    if (failures) {
        std::printf("FAIL: %d kernel(s) differ between serial and parallel paths\n", failures);
        return 1;
    }
    std::printf("all kernels bitwise identical across paths\n");
    return 0;
}
