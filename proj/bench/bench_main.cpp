#include <chrono>
#include <cstdio>

#include "cml/carpet_modulus.hpp"
#include "cml/experiments.hpp"
#include "cml/parallel.hpp"
#include "cml/tangent.hpp"

using namespace cml;

namespace {

template <class F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* label, double serial_ms, double parallel_ms) {
    std::printf("%-34s %10.1f ms %10.1f ms %8.2fx\n", label, serial_ms, parallel_ms,
                parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

} // namespace

int main() {
    std::printf("threads available: %d\n", max_jobs());
    std::printf("%-34s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        CircleCatalog cat = CircleCatalog::build(CarpetSpec::fnp(5, 1), 3);
        double s = time_ms([&] { build_touch_incidence(cat, 3, true, false); });
        double p = time_ms([&] { build_touch_incidence(cat, 3, true, true); });
        row("touch incidence F_{5,1} k=3", s, p);
    }
    {
        CircleCatalog cat = CircleCatalog::build(CarpetSpec::fnp(5, 1), 2);
        PathFamilySpec fam{CarpetSpec::fnp(5, 1), 2, 0, cat.resolve_name("M1"), true};
        CarpetSolveOptions so, po;
        so.engine.parallel = false;
        po.engine.parallel = true;
        double s = time_ms([&] { carpet_modulus(fam, so); });
        double p = time_ms([&] { carpet_modulus(fam, po); });
        row("modulus solve (O,M1) k=2", s, p);
    }
    {
        ExperimentConfig cfg;
        cfg.spec = CarpetSpec::fnp(5, 1);
        cfg.level = 2;
        cfg.pair_policy = "o-or-inner";
        ExperimentConfig par = cfg;
        par.parallel_rows = true;
        double s = time_ms([&] { interchange_table(cfg); });
        double p = time_ms([&] { interchange_table(par); });
        row("interchange rows (o-or-inner) k=2", s, p);
    }
    {
        double s = time_ms([&] { projection_mass(CarpetSpec::fnp(5, 1), 4, false); });
        double p = time_ms([&] { projection_mass(CarpetSpec::fnp(5, 1), 4, true); });
        row("projection mass d=4", s, p);
    }
    return 0;
}
