#pragma once

// Command-line driver logic, kept out of main() so the test suite can run
// it in-process. run() computes the requested Lie coefficients, optionally
// runs verification checks and the k-scaling benchmark, and writes one
// JSON or CSV report.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "models.hpp"
#include "oracle.hpp"

namespace liejet {

struct RunConfig {
    std::string model = "gantry";
    std::string field = "h";   // h | g | f (f treated as the input field of lie_vector)
    int order = 10;
    std::vector<double> x0;      // empty = model default
    std::vector<double> params;  // empty = model default
    std::string format = "json";
    std::string check;  // "", cross, fd, nested, all
    bool bench = false;
    int reps = 3;
    std::string out_path;  // empty = stdout
};

namespace detail {

inline double now_s() {
    using clk = std::chrono::steady_clock;
    return std::chrono::duration<double>(clk::now().time_since_epoch()).count();
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// least-squares slope of log t vs log k
inline double loglog_slope(const std::vector<int>& ks, const std::vector<double>& ts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double x = std::log(double(ks[i])), y = std::log(ts[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace detail

// One resolved model instance: the tape plus the chosen field evaluator.
struct ModelInstance {
    CodeList tape;
    std::vector<double> x0;
    FieldKind kind = FieldKind::Scalar;
    std::function<TaylorArray<double>(const TaylorArray<double>&)> field;
    // scalar-field callables for the nested oracle (field h only)
    VectorFieldFn f_fn;
    std::vector<ScalarFieldFn> h_fns;
    double tape_build_s = 0;
};

inline ModelInstance make_model(const RunConfig& cfg) {
    ModelInstance m;
    if (cfg.model == "gantry") {
        GantryParams P;
        if (!cfg.params.empty()) {
            if (cfg.params.size() != 4)
                throw ConfigError("gantry expects 4 params: M,m,ell,G");
            P = {cfg.params[0], cfg.params[1], cfg.params[2], cfg.params[3]};
        }
        P.validate();
        const double t0 = detail::now_s();
        m.tape = gantry_tape(P);
        m.tape_build_s = detail::now_s() - t0;
        m.x0 = cfg.x0.empty() ? gantry_x0() : cfg.x0;
        if (m.x0.size() != 4) throw ConfigError("gantry state has dimension 4");
        if (cfg.field == "h") {
            m.kind = FieldKind::Scalar;
            m.field = [P](const TaylorArray<double>& x) { return gantry_h_eval(x, P); };
            m.f_fn = [P](const std::vector<double>& x) { return gantry_f(x, P); };
            m.h_fns = {[P](const std::vector<double>& x) { return gantry_h(x, P)[0]; },
                       [P](const std::vector<double>& x) { return gantry_h(x, P)[1]; }};
        } else if (cfg.field == "g") {
            m.kind = FieldKind::Vector;
            m.field = [P](const TaylorArray<double>& x) { return gantry_g_eval(x, P); };
        } else if (cfg.field == "f") {
            m.kind = FieldKind::Vector;
            m.field = [P](const TaylorArray<double>& x) { return gantry_f_eval(x, P); };
        } else {
            throw ConfigError("unknown field '" + cfg.field + "' (expected h, g or f)");
        }
    } else if (cfg.model == "nilpotent2") {
        // f(x) = Ax with A = [[0,1],[0,0]]; h = x_0, g = (0,1)
        const Mat<double> a = nilpotent2_matrix();
        const double t0 = detail::now_s();
        m.tape = linear_tape(a);
        m.tape_build_s = detail::now_s() - t0;
        m.x0 = cfg.x0.empty() ? std::vector<double>{1.0, 1.0} : cfg.x0;
        if (m.x0.size() != 2) throw ConfigError("nilpotent2 state has dimension 2");
        if (!cfg.params.empty()) throw ConfigError("nilpotent2 takes no params");
        if (cfg.field == "h") {
            m.kind = FieldKind::Scalar;
            m.field = [](const TaylorArray<double>& x) {
                return TaylorArray<double>::from_elements({1, 1}, {x.at(0)});
            };
            m.f_fn = [a](const std::vector<double>& x) {
                return std::vector<double>{x[1], 0.0};
            };
            m.h_fns = {[](const std::vector<double>& x) { return x[0]; }};
        } else if (cfg.field == "g") {
            m.kind = FieldKind::Vector;
            m.field = [](const TaylorArray<double>& x) {
                return constant_column_eval<double>({0.0, 1.0}, x.order());
            };
        } else if (cfg.field == "f") {
            m.kind = FieldKind::Vector;
            m.field = [a](const TaylorArray<double>& x) {
                std::vector<TaylorSeries<double>> v{x.at(1),
                                                    TaylorSeries<double>::zero(x.order())};
                return TaylorArray<double>::from_elements({2, 1}, std::move(v));
            };
        } else {
            throw ConfigError("unknown field '" + cfg.field + "' (expected h, g or f)");
        }
    } else {
        throw ConfigError("unknown model '" + cfg.model + "'");
    }
    return m;
}

inline LieResult<double> compute_result(const ModelInstance& m, int p) {
    if (m.kind == FieldKind::Scalar) return lie_scalar(m.tape, m.field, m.x0, p);
    return lie_vector(m.tape, m.field, m.x0, p);
}

inline nlohmann::json run_checks(const RunConfig& cfg, const ModelInstance& m,
                                 const LieResult<double>& res) {
    nlohmann::json checks = nlohmann::json::object();
    const bool all = cfg.check == "all";

    if (all || cfg.check == "cross") {
        double worst = 0;
        if (m.kind == FieldKind::Vector) {
            auto alt = lie_vector_zrec(m.tape, m.field, m.x0, cfg.order);
            for (double e : normwise_rel_errors(res.coeffs, alt.coeffs)) worst = std::max(worst, e);
        } else {
            // scalar fields have no second path; check trunc(Z J) = I instead
            auto graded = taylcoeffs(m.tape, m.x0, cfg.order);
            auto a = field_jacobian_coeffs(m.tape, graded.state_series());
            auto z = z_recurrence(a);
            auto j = j_recurrence(a);
            const std::size_t n = m.x0.size();
            auto mat_max = [n](const Mat<double>& mm) {
                double v = 0;
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t c = 0; c < n; ++c) v = std::max(v, std::fabs(mm(r, c)));
                return v;
            };
            for (int k = 0; k <= cfg.order; ++k) {
                Mat<double> s(n, n);
                double scale = 1.0;  // residual is relative to the summands' size
                for (int i = 0; i <= k; ++i) {
                    s = s + z[std::size_t(i)] * j[std::size_t(k - i)];
                    scale = std::max(scale,
                                     mat_max(z[std::size_t(i)]) * mat_max(j[std::size_t(k - i)]));
                }
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t c = 0; c < n; ++c)
                        worst = std::max(worst, std::fabs(s(r, c) - (k == 0 && r == c ? 1.0 : 0.0)) /
                                                    scale);
            }
        }
        const double tol = 1e-12;
        checks["cross"] = {{"max_rel", worst}, {"tol", tol}, {"pass", worst <= tol}};
    }

    if (all || cfg.check == "fd") {
        auto rep = finite_difference_jacobian_check(m.tape, m.x0, std::min(cfg.order, 5));
        const double tol = 1e-6;
        checks["fd"] = {{"max_rel", rep.max_rel}, {"tol", tol}, {"pass", rep.max_rel <= tol}};
    }

    if ((all || cfg.check == "nested") && m.kind == FieldKind::Scalar) {
        const int kmax = std::min(cfg.order, 3);
        auto ref = lie_family_nested_oracle(m.f_fn, m.h_fns, m.x0, kmax);
        const double tol = 1e-5;
        double worst = 0;
        for (int k = 0; k <= kmax; ++k) {
            auto got = res.get_derivative(k);
            double amax = 0, rmax = 0;
            for (std::size_t i = 0; i < got.size(); ++i) {
                amax = std::max(amax, std::fabs(got[i] - ref[i][std::size_t(k)]));
                rmax = std::max(rmax, std::fabs(ref[i][std::size_t(k)]));
            }
            worst = std::max(worst, amax / std::max(1.0, rmax));
        }
        checks["nested"] = {{"max_rel", worst}, {"tol", tol}, {"pass", worst <= tol}};
    } else if (cfg.check == "nested") {
        throw ConfigError("--check nested applies only to scalar fields (field h)");
    }
    return checks;
}

struct BenchResult {
    std::vector<int> ks;
    std::vector<double> median_s;
    double exponent = 0;
    double tape_build_s = 0;
};

inline BenchResult bench_scaling(const ModelInstance& m, int kmax, int reps) {
    if (kmax < 4) throw ConfigError("--bench needs order >= 4");
    if (reps < 3) throw ConfigError("--bench needs reps >= 3");
    BenchResult b;
    b.tape_build_s = m.tape_build_s;
    for (int k = 1; k <= kmax; ++k) {
        std::vector<double> ts;
        for (int r = 0; r < reps; ++r) {
            const double t0 = detail::now_s();
            volatile double sink = compute_result(m, k).get_tc(k)[0];
            (void)sink;
            ts.push_back(detail::now_s() - t0);
        }
        b.ks.push_back(k);
        b.median_s.push_back(detail::median(std::move(ts)));
    }
    b.exponent = detail::loglog_slope(b.ks, b.median_s);
    return b;
}

inline std::string emit_json(const RunConfig& cfg, const ModelInstance& m,
                             const LieResult<double>& res, const nlohmann::json& checks,
                             const BenchResult* bench, double compute_s) {
    nlohmann::json j;
    j["model"] = cfg.model;
    j["field"] = cfg.field;
    j["order"] = cfg.order;
    j["x0"] = m.x0;
    nlohmann::json tc = nlohmann::json::array(), dv = nlohmann::json::array();
    for (int k = 0; k <= cfg.order; ++k) {
        tc.push_back(res.get_tc(k));
        dv.push_back(res.get_derivative(k));
    }
    j["tc"] = std::move(tc);
    j["derivative"] = std::move(dv);
    j["checks"] = checks;
    j["timing"] = {{"tape_build_s", m.tape_build_s}, {"compute_s", compute_s}};
    if (bench) {
        j["timing"]["bench"] = {{"k", bench->ks},
                                {"median_s", bench->median_s},
                                {"exponent", bench->exponent}};
    }
    return j.dump(2) + "\n";
}

inline std::string emit_csv(const RunConfig& cfg, const LieResult<double>& res) {
    std::ostringstream os;
    os << "k,index,tc,derivative\n";
    for (int k = 0; k <= cfg.order; ++k) {
        auto tc = res.get_tc(k);
        auto dv = res.get_derivative(k);
        for (std::size_t i = 0; i < tc.size(); ++i)
            os << k << ',' << i << ',' << detail::fmt17(tc[i]) << ','
               << detail::fmt17(dv[i]) << '\n';
    }
    return os.str();
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.order < 0) throw ConfigError("--order must be >= 0");
        if (cfg.format != "json" && cfg.format != "csv")
            throw ConfigError("--format must be json or csv");
        if (!cfg.check.empty() && cfg.check != "cross" && cfg.check != "fd" &&
            cfg.check != "nested" && cfg.check != "all")
            throw ConfigError("--check must be cross, fd, nested or all");

        ModelInstance m = make_model(cfg);

        const double t0 = detail::now_s();
        LieResult<double> res = compute_result(m, cfg.order);
        const double compute_s = detail::now_s() - t0;

        nlohmann::json checks = nlohmann::json::object();
        if (!cfg.check.empty()) checks = run_checks(cfg, m, res);

        BenchResult bench;
        const bool do_bench = cfg.bench;
        if (do_bench) bench = bench_scaling(m, cfg.order, cfg.reps);

        const std::string report =
            cfg.format == "json"
                ? emit_json(cfg, m, res, checks, do_bench ? &bench : nullptr, compute_s)
                : emit_csv(cfg, res);
        if (!cfg.out_path.empty()) {
            std::ofstream f(cfg.out_path);
            if (!f) throw ConfigError("cannot open --out path " + cfg.out_path);
            f << report;
        } else {
            out << report;
        }

        for (const auto& [name, c] : checks.items())
            if (!c["pass"].get<bool>())
                throw CheckFailed(name + " check: max_rel " +
                                  std::to_string(c["max_rel"].get<double>()) + " > tol " +
                                  std::to_string(c["tol"].get<double>()));
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CheckFailed& e) {
        err << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace liejet
