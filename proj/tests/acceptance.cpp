// Acceptance suite: one self-contained check per criterion, one PASS/FAIL
// line each, nonzero exit on any failure. Run a single criterion with
// `acceptance --only N`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mollify/approx.hpp"
#include "mollify/convolve.hpp"
#include "mollify/funcspec.hpp"
#include "mollify/kernels.hpp"
#include "mollify/linalg.hpp"

using namespace mollify;

namespace {

constexpr double kPi = std::numbers::pi;

struct Criterion {
    int id;
    std::string title;
    std::function<bool(std::string&)> run;
};

bool unit_integral_reproduction(std::string& detail) {
    const FunctionSpec one = FunctionSpec::constant(1.0, 1);
    double worst = 0.0;
    for (const char* name : {"poisson", "poisson2", "gauss", "bump"}) {
        const Kernel& k = kernel_by_name(name);
        for (double t : {0.01, 0.1, 1.0}) {
            double v = convolve_at1(one, ScaledKernel(k, t), 0.0);
            worst = std::max(worst, std::abs(v - 1.0));
        }
    }
    std::ostringstream os;
    os << "max |conv(1) - 1| = " << worst << " (tol 1e-6)";
    detail = os.str();
    return worst <= 1e-6;
}

bool uniform_convergence(std::string& detail) {
    const FunctionSpec hat = function_by_name("hat");
    const Kernel& g = kernel_by_name("gauss");
    std::vector<double> ts{0.2, 0.1, 0.05};
    ApproximationReport rep = sweep(hat, g, ts, Box::interval(-2.0, 2.0), 81);
    bool decreasing = rep.entries[0].sup_error > rep.entries[1].sup_error &&
                      rep.entries[1].sup_error > rep.entries[2].sup_error;

    // Lipschitz-moment oracle: error <= L * t * (first absolute moment).
    double moment = 0.0;
    {
        long m = 1 << 14;
        double h = 20.0 / m;
        for (long i = 0; i < m; ++i) {
            double v = (i + 0.5) * h;
            moment += 2.0 * v * g.value1(v) * h;
        }
    }
    bool within_oracle = true;
    for (size_t i = 0; i < ts.size(); ++i) {
        if (rep.entries[i].sup_error > ts[i] * moment + 1e-6) within_oracle = false;
    }
    std::ostringstream os;
    os << "errors " << rep.entries[0].sup_error << " > " << rep.entries[1].sup_error << " > "
       << rep.entries[2].sup_error << ", final tol 0.05, moment bound " << ts[2] * moment;
    detail = os.str();
    return decreasing && rep.entries[2].sup_error <= 0.05 && within_oracle;
}

bool jump_average(std::string& detail) {
    const FunctionSpec step = function_by_name("step");
    double worst = 0.0;
    for (const char* name : {"poisson", "poisson2", "gauss", "bump"}) {
        const Kernel& k = kernel_by_name(name);
        if (!k.parity_even()) continue;
        for (double t : {0.1, 0.01}) {
            double v = jump_value(step, ScaledKernel(k, t), 0.0);
            worst = std::max(worst, std::abs(v - 0.5));
        }
    }
    std::ostringstream os;
    os << "max |value - 1/2| = " << worst << " (tol 1e-6)";
    detail = os.str();
    return worst <= 1e-6;
}

bool concentration(std::string& detail) {
    const Kernel& p = kernel_by_name("poisson");
    double worst = 0.0;
    for (double t : {1.0, 0.1, 0.01}) {
        double want = (2.0 / kPi) * std::atan(1.0 / t);
        worst = std::max(worst, std::abs(ball_mass(p, t, 1.0) - want));
    }
    std::ostringstream os;
    os << "max |ball_mass - (2/pi) atan(1/t)| = " << worst << " (tol 1e-8)";
    detail = os.str();
    return worst <= 1e-8;
}

bool partial_fraction_round_trip(std::string& detail) {
    std::mt19937_64 rng(20260808ULL);
    std::uniform_real_distribution<double> re(-1.5, 1.5);
    std::uniform_real_distribution<double> im(-1.5, 1.5);
    std::uniform_int_distribution<int> deg(2, 8);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const int n = deg(rng);
        std::vector<Cx> roots;
        while (static_cast<int>(roots.size()) < n) {
            Cx cand(re(rng), im(rng));
            if (std::abs(cand.imag()) < 0.02) continue;
            bool ok = true;
            for (Cx r : roots) {
                if (std::abs(cand - r) < 0.1) ok = false;
            }
            if (ok) roots.push_back(cand);
        }
        std::vector<Cx> num(static_cast<size_t>(std::max(1, n - 2)));
        for (Cx& c : num) c = Cx(re(rng), im(rng));
        RationalFunction r(Polynomial(std::move(num)), Polynomial::from_roots(Cx(1.0), roots));

        PFDecomposition pf = partial_fractions(r);
        int checked = 0;
        while (checked < 200) {
            Cx x(re(rng) * 2.0);
            bool near = false;
            for (Cx root : roots) {
                if (std::abs(x - root) < 0.1) near = true;
            }
            if (near) continue;
            Cx want = r(x);
            worst = std::max(worst, std::abs(pf(x) - want) / (1.0 + std::abs(want)));
            ++checked;
        }
    }
    std::ostringstream os;
    os << "max relative reconstruction error = " << worst << " (tol 1e-9)";
    detail = os.str();
    return worst <= 1e-9;
}

bool certified_polynomialization(std::string& detail) {
    const Kernel& p = kernel_by_name("poisson");
    const RationalFunction& r = std::get<RationalShape>(p.shape()).r;
    CertifiedPolynomial cp = rational_to_polynomial(r, Interval(-1.0, 1.0), 1e-3);
    double measured = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        double x = -1.0 + 2.0 * i / 10000.0;
        measured = std::max(measured, std::abs(cp(x) - r.eval_real(x)));
    }
    std::ostringstream os;
    os << "measured " << measured << " <= bound " << cp.bound << " <= 1e-3, degree "
       << cp.degree();
    detail = os.str();
    return measured <= cp.bound && cp.bound <= 1e-3;
}

bool constructive_weierstrass(std::string& detail) {
    const FunctionSpec f = function_by_name("abs");
    CertifiedPolynomial cp = weierstrass(f, Interval(-1.0, 1.0), 0.1);
    bool stages_ok = true;
    for (double b : cp.pipeline.stage_bounds) {
        if (b > 0.1 / 3.0) stages_ok = false;
    }
    double measured = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double x = -1.0 + 2.0 * i / 9999.0;
        measured = std::max(measured, std::abs(cp(x) - f.eval1(x)));
    }
    std::ostringstream os;
    os << "measured " << measured << " (tol 0.1), stages " << cp.pipeline.stage_bounds[0] << "/"
       << cp.pipeline.stage_bounds[1] << "/" << cp.pipeline.stage_bounds[2]
       << " each <= " << 0.1 / 3.0 << ", t=" << cp.pipeline.t << " h=" << cp.pipeline.h
       << " degree=" << cp.degree();
    detail = os.str();
    return measured <= 0.1 && stages_ok;
}

bool tensor_factorization(std::string& detail) {
    Kernel tensor = make_tensor({make_gaussian(1), make_gaussian(1)});
    QuadBudget budget;
    budget.tol = 2.5e-7;
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> u(-0.9, 0.9);

    const FunctionSpec gen = function_by_name("smoothbump2");
    double worst_direct = 0.0;
    for (int i = 0; i < 25; ++i) {
        Point p{u(rng), u(rng), 0.0};
        double it = convolve_tensor(gen, tensor, 0.4, p, budget);
        double direct = convolve_at(gen, ScaledKernel(tensor, 0.4), p, budget);
        worst_direct = std::max(worst_direct, std::abs(it - direct));
    }

    const FunctionSpec sep = function_by_name("smoothbox2");
    QuadBudget tight;
    tight.tol = 1e-9;
    double worst_sep = 0.0;
    for (int i = 0; i < 10; ++i) {
        Point p{u(rng), u(rng), 0.0};
        double it = convolve_tensor(sep, tensor, 0.5, p, tight);
        double f1 = convolve_at1(sep.factors()[0], ScaledKernel(make_gaussian(1), 0.5), p[0], tight);
        double f2 = convolve_at1(sep.factors()[1], ScaledKernel(make_gaussian(1), 0.5), p[1], tight);
        worst_sep = std::max(worst_sep, std::abs(it - f1 * f2));
    }
    std::ostringstream os;
    os << "iterated vs direct " << worst_direct << " (tol 1e-6), separable factorization "
       << worst_sep << " (tol 1e-8)";
    detail = os.str();
    return worst_direct <= 1e-6 && worst_sep <= 1e-8;
}

bool radial_commutation(std::string& detail) {
    Kernel g2 = make_gaussian(2);
    const FunctionSpec f = function_by_name("smoothbox2");
    QuadBudget budget;
    budget.tol = 1e-5;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    std::vector<Point> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(point2(u(rng), u(rng)));
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        OrthogonalMap map = OrthogonalMap::random(2, rng);
        worst = std::max(worst, commutation_defect(f, g2, 0.4, map, pts, budget));
    }

    const FunctionSpec radial_f = function_by_name("smoothbump2");
    ScaledKernel kt(g2, 0.4);
    double lo = 1e300;
    double hi = -1e300;
    for (int i = 0; i < 16; ++i) {
        double ang = 2.0 * kPi * i / 16.0;
        double v = convolve_at(radial_f, kt, point2(0.5 * std::cos(ang), 0.5 * std::sin(ang)),
                               budget);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::ostringstream os;
    os << "max defect " << worst << " (tol 1e-4), radial spread " << (hi - lo) << " (tol 1e-4)";
    detail = os.str();
    return worst <= 1e-4 && (hi - lo) <= 1e-4;
}

bool riemann_translates(std::string& detail) {
    const FunctionSpec hat = function_by_name("hat");
    const Kernel& p = kernel_by_name("poisson");
    ScaledKernel kt(p, 0.5);
    QuadBudget tight;
    tight.tol = 1e-8;

    double prev = 1e300;
    double final_gap = 0.0;
    bool decreasing = true;
    for (double h : {0.2, 0.1, 0.05}) {
        TranslateSum ts = riemann_rational(hat, p, 0.5, h);
        double gap = 0.0;
        for (int i = 0; i < 50; ++i) {
            double x = -2.0 + 4.0 * i / 49.0;
            gap = std::max(gap, std::abs(ts(x) - convolve_at1(hat, kt, x, tight)));
        }
        if (gap >= prev) decreasing = false;
        prev = gap;
        final_gap = gap;
    }

    TranslateSum ts21 = riemann_rational(hat, p, 0.5, 0.1);
    RationalFunction collapsed = collapse(ts21);
    double collapse_gap = 0.0;
    for (int i = 0; i <= 200; ++i) {
        double x = -2.0 + 4.0 * i / 200.0;
        collapse_gap = std::max(collapse_gap, std::abs(collapsed.eval_real(x) - ts21(x)));
    }
    std::ostringstream os;
    os << "final gap " << final_gap << " (tol 1e-3, decreasing " << (decreasing ? "yes" : "no")
       << "), " << ts21.size() << "-term collapse gap " << collapse_gap << " (tol 1e-8)";
    detail = os.str();
    return decreasing && final_gap <= 1e-3 && ts21.size() == 21 && collapse_gap <= 1e-8;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);
    }

    std::vector<Criterion> criteria{
        {1, "unit-integral reproduction", unit_integral_reproduction},
        {2, "uniform convergence on a compact set", uniform_convergence},
        {3, "jump average with even kernels", jump_average},
        {4, "ball-mass concentration", concentration},
        {5, "partial-fraction round trip", partial_fraction_round_trip},
        {6, "certified polynomialization", certified_polynomialization},
        {7, "constructive weierstrass", constructive_weierstrass},
        {8, "tensor factorization", tensor_factorization},
        {9, "radial commutation", radial_commutation},
        {10, "riemann-sum translates", riemann_translates},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (only != 0 && c.id != only) continue;
        std::string det;
        bool ok = false;
        auto start = std::chrono::steady_clock::now();
        try {
            ok = c.run(det);
        } catch (const std::exception& e) {
            det = std::string("exception: ") + e.what();
        }
        auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  %2d  %-38s [%6.1fs]  %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    secs, det.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures == 0) {
        std::printf("acceptance: all criteria passed\n");
    } else {
        std::printf("acceptance: %d criterion(s) failed\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
