// Timing comparison of the OpenMP kernels against their serial reference
// implementations. Results are printed as a small table; the outputs are
// also cross-checked so a benchmark run doubles as a consistency test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "noon/channels.hpp"
#include "noon/metrology.hpp"
#include "noon/state.hpp"
#include "noon/sweep.hpp"

using namespace noon;

namespace {

double time_of(const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s) {
    std::printf("%-34s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n", name,
                serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s);
}

} // namespace

int main(int argc, char** argv) {
    int scale = 1;
    if (argc > 1) scale = std::max(1, std::atoi(argv[1]));

    // phase-error profile over a dense grid
    {
        const auto s = apply_constant_loss(pure_noon(6), {0.92, 0.9});
        std::vector<double> grid(400000 * scale);
        for (size_t i = 0; i < grid.size(); ++i)
            grid[i] = M_PI / 6.0 * (i + 0.5) / grid.size();
        PhaseErrorProfile ps, pp;
        const double ts = time_of([&] { ps = phase_error_profile_serial(s, 6, grid); });
        const double tp = time_of([&] { pp = phase_error_profile(s, 6, grid); });
        double max_diff = 0.0;
        for (size_t i = 0; i < grid.size(); ++i) {
            if (std::isnan(ps.dphi[i]) && std::isnan(pp.dphi[i])) continue;
            max_diff = std::max(max_diff, std::abs(ps.dphi[i] - pp.dphi[i]));
        }
        report("phase_error_profile (400k grid)", ts, tp);
        if (max_diff != 0.0) {
            std::printf("  MISMATCH: serial and parallel profiles differ by %g\n", max_diff);
            return 1;
        }
    }

    // lossy minimal-error sweep driver (per-row channel construction)
    {
        auto c = preset_config(Scenario::LossyMinError);
        c.sweep = {"M", 1.0, 120.0, 120, false};
        std::string serial_csv, parallel_csv;
        double ts = 0.0, tp = 0.0;
        for (int rep = 0; rep < 20 * scale; ++rep) {
            c.jobs = 1;
            ts += time_of([&] { serial_csv = to_csv(run_scenario(c)); });
            c.jobs = 0;
            tp += time_of([&] { parallel_csv = to_csv(run_scenario(c)); });
        }
        report("fig2 sweep x20", ts, tp);
        if (serial_csv != parallel_csv) {
            std::printf("  MISMATCH: serial and parallel sweep CSVs differ\n");
            return 1;
        }
    }

    // vacuum-mix combined sweep (tau + minimal error per row)
    {
        auto c = preset_config(Scenario::VacuumMixCombined);
        c.sweep.count = 200000 * scale + 1;
        std::string serial_csv, parallel_csv;
        c.jobs = 1;
        const double ts = time_of([&] { serial_csv = to_csv(run_scenario(c)); });
        c.jobs = 0;
        const double tp = time_of([&] { parallel_csv = to_csv(run_scenario(c)); });
        report("fig4 sweep (200k rows)", ts, tp);
        if (serial_csv != parallel_csv) {
            std::printf("  MISMATCH: serial and parallel sweep CSVs differ\n");
            return 1;
        }
    }

    return 0;
}
