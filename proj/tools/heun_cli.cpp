// Batch front end: evaluate expansions, compare them against the local-series
// and path-integration oracles, dump recurrence bands, hunt terminations, scan
// empirical convergence radii, and evaluate the underlying special functions.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "heun/expansions.hpp"
#include "heun/frobenius.hpp"
#include "heun/heun_core.hpp"
#include "heun/numeric.hpp"
#include "heun/special_functions.hpp"
#include "heun/termination.hpp"

using namespace heun;
using nlohmann::ordered_json;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct ParamFlags {
    double gamma = 0, gamma_im = 0, delta = 0, delta_im = 0, epsilon = 0, epsilon_im = 0;
    double alpha = 0, alpha_im = 0, q = 0, q_im = 0;

    void attach(CLI::App* app, bool require_epsilon = true) {
        app->add_option("--gamma", gamma)->required();
        app->add_option("--delta", delta)->required();
        auto e = app->add_option("--epsilon", epsilon);
        app->add_option("--gamma-im", gamma_im);
        app->add_option("--delta-im", delta_im);
        app->add_option("--epsilon-im", epsilon_im);
        app->add_option("--alpha", alpha);
        app->add_option("--alpha-im", alpha_im);
        app->add_option("--q", q);
        app->add_option("--q-im", q_im);
        if (require_epsilon) e->required();
    }
    HeunParams params() const {
        return {{gamma, gamma_im}, {delta, delta_im}, {epsilon, epsilon_im}, {alpha, alpha_im}, {q, q_im}};
    }
};

SumOptions global_sum_options() {
    SumOptions opt;
    if (const char* env = std::getenv("HEUN_MAX_TERMS")) {
        int cap = std::atoi(env);
        if (cap > 0) {
            opt.max_terms_2f1 = cap;
            opt.max_diagonals_f1 = cap;
        }
    }
    return opt;
}

Complex resolve_mu(const std::string& tok, const HeunParams& p) {
    if (tok == "0" || tok == "zero") return {0, 0};
    if (tok == "1" || tok == "one") return {1, 0};
    if (tok == "2" || tok == "two") return {2, 0};
    if (tok == "gamma") return p.gamma;
    if (tok == "delta") return p.delta;
    throw Error(ErrorCode::ConfigError, "unknown mu token '" + tok + "'");
}

Complex resolve_center(const std::string& tok, double re, double im, ExpansionKind kind,
                       const HeunParams& p) {
    if (tok == "0") return {0, 0};
    if (tok == "1") return {1, 0};
    if (tok == "z0") return build_eq3(p).z0;
    if (tok == "z1") return build_eq25(p).z1;
    if (tok == "z2") return build_eq25(p).z2;
    if (tok == "custom") return {re, im};
    switch (kind) {
        case ExpansionKind::Type1Beta0:
        case ExpansionKind::Type2Beta0: return {0, 0};
        case ExpansionKind::Type1Beta1:
        case ExpansionKind::Type2Beta1: return {1, 0};
        case ExpansionKind::Type1Appell: return build_eq3(p).z0;
        case ExpansionKind::Type2Appell: return build_eq25(p).z1;
    }
    return {re, im};
}

void write_text(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot open output file " + path);
    f << body;
}

ordered_json complex_json(Complex z) {
    return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

int error_exit(const Error& err) {
    ordered_json rec;
    rec["error"] = error_code_name(err.code());
    rec["message"] = err.what();
    std::cerr << rec.dump() << "\n";
    switch (err.code()) {
        case ErrorCode::NoConvergence: return 2;
        case ErrorCode::InternalError:
        case ErrorCode::CertificationFailed: return 4;
        default: return 1;
    }
}

// -------------------------------------------------- eval

int run_eval(const ParamFlags& pf, const std::string& kind_tok, const std::string& mu_tok,
             const std::string& center_tok, double center_re, double center_im, double z_re,
             double z_im, const std::vector<double>& z_grid, int terms, const std::string& out) {
    auto kind = expansion_kind_from_name(kind_tok);
    if (!kind) throw Error(ErrorCode::ConfigError, "unknown kind '" + kind_tok + "'");
    HeunParams p = pf.params();
    Complex center = resolve_center(center_tok, center_re, center_im, *kind, p);
    Complex mu = resolve_mu(mu_tok, p);
    ExpansionSpec spec = make_spec(*kind, p, center, mu);

    std::vector<Complex> zs;
    if (z_grid.size() == 3) {
        int count = static_cast<int>(z_grid[2]);
        if (count < 1) throw Error(ErrorCode::ConfigError, "grid count must be >= 1");
        for (int k = 0; k < count; ++k) {
            double t = count == 1 ? 0.0 : double(k) / double(count - 1);
            zs.push_back({z_grid[0] + (z_grid[1] - z_grid[0]) * t, z_im});
        }
    } else {
        zs.push_back({z_re, z_im});
    }

    EvalOptions opt;
    opt.sum = global_sum_options();
    opt.allow_divergence = true;
    std::ostringstream csv;
    csv << "z_re,z_im,u_re,u_im,terms_used,last_term_mag,converged\n";
    bool all_converged = true;
    for (Complex z : zs) {
        EvaluatedExpansion ev = eval_expansion(spec, z, terms, opt);
        all_converged = all_converged && ev.diagnostics.converged;
        csv << fmt_double(z.real()) << ',' << fmt_double(z.imag()) << ','
            << fmt_double(ev.value.real()) << ',' << fmt_double(ev.value.imag()) << ','
            << ev.diagnostics.terms_used << ',' << fmt_double(ev.diagnostics.last_term_magnitude)
            << ',' << (ev.diagnostics.converged ? "true" : "false") << '\n';
    }
    write_text(out, csv.str());
    return all_converged ? 0 : 2;
}

// -------------------------------------------------- compare

int run_compare(const ParamFlags& pf, const std::string& kind_tok, const std::string& mu_tok,
                const std::string& center_tok, double center_re, double center_im, int terms,
                int points, double tolerance, const std::string& out) {
    auto kind = expansion_kind_from_name(kind_tok);
    if (!kind) throw Error(ErrorCode::ConfigError, "unknown kind '" + kind_tok + "'");
    HeunParams p = pf.params();
    Complex center = resolve_center(center_tok, center_re, center_im, *kind, p);
    Complex mu = resolve_mu(mu_tok, p);
    ExpansionSpec spec = make_spec(*kind, p, center, mu);

    std::vector<Complex> zs;
    if (spec.is_appell()) {
        if (terms <= 0) terms = 18;
        for (int k = 0; k < points; ++k)
            zs.push_back(center * Complex(0.76 + 0.1 * double(k) / std::max(1, points - 1), 0.01));
    } else {
        if (terms <= 0) terms = 120;
        for (int k = 0; k < points; ++k)
            zs.push_back({0.1 + 0.45 * double(k) / std::max(1, points - 1), 0.05});
    }

    EvalOptions opt;
    opt.sum = global_sum_options();
    std::vector<Complex> uvals;
    for (Complex z : zs) uvals.push_back(eval_expansion(spec, z, terms, opt).value);

    auto b0 = frobenius_heun(p, ExponentChoice::zero, 320);
    auto b1 = frobenius_heun(p, ExponentChoice::one_minus_gamma, 320);
    std::vector<Complex> c0, c1;
    for (Complex z : zs) {
        c0.push_back(eval_oracle(b0, z).u);
        c1.push_back(eval_oracle(b1, z).u);
    }
    SpanFit fit = fit_two_column_span(c0, c1, uvals);

    ordered_json rep;
    rep["kind"] = kind_tok;
    rep["points"] = ordered_json::array();
    double max_dev = 0.0;
    double unorm = 0.0;
    for (Complex u : uvals) unorm = std::max(unorm, std::abs(u));
    for (size_t i = 0; i < zs.size(); ++i) {
        Complex fitval = fit.k1 * c0[i] + fit.k2 * c1[i];
        double dev = std::abs(uvals[i] - fitval) / (unorm + 1e-300);
        max_dev = std::max(max_dev, dev);
        rep["points"].push_back(ordered_json{{"z_re", zs[i].real()},
                                             {"z_im", zs[i].imag()},
                                             {"deviation", dev}});
    }
    rep["max_deviation"] = max_dev;
    rep["tolerance"] = tolerance;
    bool pass = max_dev < tolerance;
    rep["pass"] = pass;
    write_text(out, rep.dump(2) + "\n");
    return pass ? 0 : 3;
}

// -------------------------------------------------- recurrence

int run_recurrence_cmd(const ParamFlags& pf, const std::string& eq, const std::string& center_tok,
                       double center_re, double center_im, const std::string& mu_tok, int nmax,
                       const std::string& out) {
    HeunParams p = pf.params();
    PolyOde ode;
    if (eq == "eq3") {
        ode = build_eq3(p).ode;
    } else if (eq == "eq25") {
        ode = build_eq25(p).ode;
    } else {
        throw Error(ErrorCode::ConfigError, "--eq must be eq3 or eq25");
    }
    Complex center;
    if (center_tok == "0")
        center = {0, 0};
    else if (center_tok == "1")
        center = {1, 0};
    else if (center_tok == "z0")
        center = build_eq3(p).z0;
    else if (center_tok == "z1")
        center = build_eq25(p).z1;
    else if (center_tok == "z2")
        center = build_eq25(p).z2;
    else if (center_tok == "custom")
        center = {center_re, center_im};
    else
        throw Error(ErrorCode::ConfigError, "unknown center token");
    Complex mu = resolve_mu(mu_tok, p);

    LocalRecurrence rec = local_recurrence(ode, center, mu);
    std::ostringstream csv;
    csv << "n,offset,re,im\n";
    for (int n = 1; n <= nmax; ++n)
        for (int j = 0; j < rec.bandwidth(); ++j) {
            Complex c = rec.coeff(n, j);
            csv << n << ',' << j << ',' << fmt_double(c.real()) << ',' << fmt_double(c.imag())
                << '\n';
        }
    write_text(out, csv.str());
    return 0;
}

// -------------------------------------------------- terminate

int run_terminate(const ParamFlags& pf, int N, const std::string& mu_tok, int center, bool five,
                  const std::string& out) {
    HeunParams p = pf.params();
    ordered_json rep;
    if (five) {
        int mu = (mu_tok == "2" || mu_tok == "two") ? 2 : 0;
        FiveTermResult res = five_term_termination(N, mu, p.gamma, p.delta);
        rep["N"] = res.N;
        rep["mu"] = complex_json(res.mu);
        rep["roots"] = ordered_json::array();
        rep["certificates"] = ordered_json::array();
        for (const auto& pr : res.pairs) {
            rep["roots"].push_back(ordered_json{{"q", complex_json(pr.q)}, {"eps", complex_json(pr.epsilon)}});
            rep["certificates"].push_back(
                ordered_json{{"a_tail_norms", {pr.cert.a_tail_norms[0], pr.cert.a_tail_norms[1],
                                               pr.cert.a_tail_norms[2]}},
                             {"max_residual", pr.cert.max_residual}});
        }
        rep["count_expected"] = res.count_expected;
        rep["count_found"] = static_cast<int>(res.pairs.size());
        rep["count_mismatch"] = res.count_mismatch;
        if (!res.note.empty()) rep["note"] = res.note;
    } else {
        MuChoice mc = (mu_tok == "0" || mu_tok == "zero") ? MuChoice::zero : MuChoice::exponent;
        TerminationResult res = four_term_termination(N, mc, center, p.gamma, p.delta, p.epsilon);
        rep["N"] = res.N;
        rep["mu"] = complex_json(res.mu);
        rep["alpha"] = complex_json(res.alpha);
        rep["roots"] = ordered_json::array();
        for (Complex r : res.roots) rep["roots"].push_back(ordered_json{{"q", complex_json(r)}});
        rep["certificates"] = ordered_json::array();
        for (const auto& cert : res.certificates)
            rep["certificates"].push_back(
                ordered_json{{"a_tail_norms", {cert.a_tail_norms[0], cert.a_tail_norms[1],
                                               cert.a_tail_norms[2]}},
                             {"max_residual", cert.max_residual}});
        rep["count_expected"] = N + 1;
        rep["count_found"] = static_cast<int>(res.roots.size());
        rep["count_mismatch"] = static_cast<int>(res.roots.size()) != N + 1;
        rep["excluded_roots"] = ordered_json::array();
        for (Complex r : res.excluded_roots) rep["excluded_roots"].push_back(complex_json(r));
    }
    write_text(out, rep.dump(2) + "\n");
    return 0;
}

// -------------------------------------------------- scan

int run_scan(const ParamFlags& pf, const std::string& kind_tok, const std::string& mu_tok,
             const std::string& center_tok, double center_re, double center_im, int angles,
             int terms, const std::string& out) {
    auto kind = expansion_kind_from_name(kind_tok);
    if (!kind) throw Error(ErrorCode::ConfigError, "unknown kind '" + kind_tok + "'");
    HeunParams p = pf.params();
    Complex center = resolve_center(center_tok, center_re, center_im, *kind, p);
    Complex mu = resolve_mu(mu_tok, p);
    ExpansionSpec spec = make_spec(*kind, p, center, mu);

    // fan the grid points across workers, gather in deterministic order
    std::vector<std::future<double>> jobs;
    std::vector<double> angle_of(static_cast<size_t>(angles));
    for (int k = 0; k < angles; ++k) {
        double ang = 2.0 * M_PI * double(k) / double(angles);
        angle_of[size_t(k)] = ang;
        jobs.push_back(std::async(std::launch::async,
                                  [spec, ang, terms]() { return empirical_domain(spec, ang, terms); }));
    }
    std::ostringstream csv;
    csv << "angle,radius\n";
    for (int k = 0; k < angles; ++k)
        csv << fmt_double(angle_of[size_t(k)]) << ',' << fmt_double(jobs[size_t(k)].get()) << '\n';
    write_text(out, csv.str());
    return 0;
}

// -------------------------------------------------- fn

int run_fn(const std::string& name, const std::vector<double>& args) {
    SumOptions opt = global_sum_options();
    auto need = [&](size_t n) {
        if (args.size() != n)
            throw Error(ErrorCode::ConfigError, "fn " + name + " takes " + std::to_string(n) + " real arguments");
    };
    Complex value;
    SeriesDiagnostics diag{0, 0.0, true};
    if (name == "2f1") {
        need(4);
        auto r = gauss_2f1({args[0], 0}, {args[1], 0}, {args[2], 0}, {args[3], 0}, opt);
        value = r.value;
        diag = r.diag;
    } else if (name == "beta") {
        need(3);
        auto r = incomplete_beta({args[0], 0}, {args[1], 0}, {args[2], 0}, opt);
        value = r.value;
        diag = r.diag;
    } else if (name == "f1") {
        need(6);
        auto r = appell_f1({args[0], 0}, {args[1], 0}, {args[2], 0}, {args[3], 0}, {args[4], 0},
                           {args[5], 0}, opt);
        value = r.value;
        diag = r.diag;
    } else if (name == "f1at1") {
        need(4);
        value = appell_f1_at_one({args[0], 0}, {args[1], 0}, {args[2], 0}, {args[3], 0}, opt);
    } else if (name == "lgamma") {
        need(2);
        value = log_gamma({args[0], args[1]});
    } else {
        throw Error(ErrorCode::ConfigError, "unknown function '" + name + "'");
    }
    std::cout << fmt_double(value.real()) << ' ' << fmt_double(value.imag()) << ' '
              << diag.terms_used << ' ' << (diag.converged ? "true" : "false") << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"confluent Heun expansions: evaluation, oracles, recurrences, terminations"};
    app.require_subcommand(1);

    auto* eval = app.add_subcommand("eval", "evaluate an expansion, emit CSV");
    ParamFlags pf_eval;
    pf_eval.attach(eval);
    std::string kind = "type1beta0", mu = "0", center_tok = "default", out = "-";
    double center_re = 0, center_im = 0, z_re = 0.3, z_im = 0;
    std::vector<double> z_grid;
    int terms = 120;
    eval->add_option("--kind", kind);
    eval->add_option("--mu", mu);
    eval->add_option("--center", center_tok);
    eval->add_option("--center-re", center_re);
    eval->add_option("--center-im", center_im);
    eval->add_option("--z", z_re);
    eval->add_option("--z-im", z_im);
    eval->add_option("--z-grid", z_grid)->expected(3);
    eval->add_option("--terms", terms);
    eval->add_option("--out", out);

    auto* cmp = app.add_subcommand("compare", "compare an expansion against the oracle span");
    ParamFlags pf_cmp;
    pf_cmp.attach(cmp);
    std::string c_kind = "type1beta0", c_mu = "0", c_center = "default", c_out = "-";
    double c_center_re = 0, c_center_im = 0, c_tol = 1e-6;
    int c_terms = 0, c_points = 10;
    cmp->add_option("--kind", c_kind);
    cmp->add_option("--mu", c_mu);
    cmp->add_option("--center", c_center);
    cmp->add_option("--center-re", c_center_re);
    cmp->add_option("--center-im", c_center_im);
    cmp->add_option("--terms", c_terms);
    cmp->add_option("--points", c_points);
    cmp->add_option("--tolerance", c_tol);
    cmp->add_option("--out", c_out);

    auto* rec = app.add_subcommand("recurrence", "dump banded recurrence coefficients as CSV");
    ParamFlags pf_rec;
    pf_rec.attach(rec);
    std::string r_eq = "eq3", r_center = "0", r_mu = "0", r_out = "-";
    double r_center_re = 0, r_center_im = 0;
    int r_nmax = 30;
    rec->add_option("--eq", r_eq);
    rec->add_option("--center", r_center);
    rec->add_option("--center-re", r_center_re);
    rec->add_option("--center-im", r_center_im);
    rec->add_option("--mu", r_mu);
    rec->add_option("--nmax", r_nmax);
    rec->add_option("--out", r_out);

    auto* term = app.add_subcommand("terminate", "find certified series terminations");
    ParamFlags pf_term;
    pf_term.attach(term, /*require_epsilon=*/false);  // the two-parameter search solves for eps
    std::string t_mu = "0", t_out = "-";
    int t_N = 1, t_center = 0;
    bool t_five = false;
    term->add_option("--N", t_N);
    term->add_option("--mu", t_mu);
    term->add_option("--center", t_center);
    term->add_flag("--five", t_five, "two-parameter search at the apparent center");
    term->add_option("--out", t_out);

    auto* scan = app.add_subcommand("scan", "empirical convergence radius per ray angle");
    ParamFlags pf_scan;
    pf_scan.attach(scan);
    std::string s_kind = "type1beta0", s_mu = "0", s_center = "default", s_out = "-";
    double s_center_re = 0, s_center_im = 0;
    int s_angles = 8, s_terms = 120;
    scan->add_option("--kind", s_kind);
    scan->add_option("--mu", s_mu);
    scan->add_option("--center", s_center);
    scan->add_option("--center-re", s_center_re);
    scan->add_option("--center-im", s_center_im);
    scan->add_option("--angles", s_angles);
    scan->add_option("--terms", s_terms);
    scan->add_option("--out", s_out);

    auto* fn = app.add_subcommand("fn", "evaluate a special function at real arguments");
    std::string fn_name;
    std::vector<double> fn_args;
    fn->add_option("name", fn_name)->required();
    fn->add_option("args", fn_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        ordered_json rec_err;
        rec_err["error"] = "E_CONFIG";
        rec_err["message"] = e.what();
        std::cerr << rec_err.dump() << "\n";
        return 1;
    }

    try {
        if (eval->parsed())
            return run_eval(pf_eval, kind, mu, center_tok, center_re, center_im, z_re, z_im, z_grid,
                            terms, out);
        if (cmp->parsed())
            return run_compare(pf_cmp, c_kind, c_mu, c_center, c_center_re, c_center_im, c_terms,
                               c_points, c_tol, c_out);
        if (rec->parsed())
            return run_recurrence_cmd(pf_rec, r_eq, r_center, r_center_re, r_center_im, r_mu,
                                      r_nmax, r_out);
        if (term->parsed()) return run_terminate(pf_term, t_N, t_mu, t_center, t_five, t_out);
        if (scan->parsed())
            return run_scan(pf_scan, s_kind, s_mu, s_center, s_center_re, s_center_im, s_angles,
                            s_terms, s_out);
        if (fn->parsed()) return run_fn(fn_name, fn_args);
    } catch (const Error& err) {
        return error_exit(err);
    } catch (const std::exception& ex) {
        ordered_json rec_err;
        rec_err["error"] = "InternalError";
        rec_err["message"] = ex.what();
        std::cerr << rec_err.dump() << "\n";
        return 4;
    }
    return 1;
}
