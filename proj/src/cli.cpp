#include <dnkw/cli.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <dnkw/verify.hpp>

namespace dnkw
{

using json = nlohmann::ordered_json;

namespace
{

json to_json(Complex c)
{
    return json::array({c.real(), c.imag()});
}

json to_json(const SquareMatrix &a)
{
    json rows = json::array();
    for (int i = 1; i <= a.dim(); ++i) {
        json row = json::array();
        for (int j = 1; j <= a.dim(); ++j)
            row.push_back(to_json(a(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const ColumnVector &v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(to_json(v(i)));
    return out;
}

std::string fmt_real(double x)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", std::abs(x) < 1e-12 ? 0.0 : x);
    return buf;
}

/// Compact text form; parts below 1e-12 are shown as zero.
std::string fmt_complex(Complex c)
{
    const double re = std::abs(c.real()) < 1e-12 ? 0.0 : c.real();
    const double im = std::abs(c.imag()) < 1e-12 ? 0.0 : c.imag();
    if (im == 0.0)
        return fmt_real(re);
    if (re == 0.0)
        return fmt_real(im) + "i";
    return fmt_real(re) + (im < 0 ? "-" : "+") + fmt_real(std::abs(im)) + "i";
}

std::string fmt_sci(double x)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

void text_matrix(std::ostream &out, const std::string &name, const SquareMatrix &a)
{
    out << name << ":\n";
    std::vector<std::string> cells;
    std::size_t width = 1;
    for (int i = 1; i <= a.dim(); ++i)
        for (int j = 1; j <= a.dim(); ++j) {
            cells.push_back(fmt_complex(a(i, j)));
            width = std::max(width, cells.back().size());
        }
    for (int i = 0; i < a.dim(); ++i) {
        out << ' ';
        for (int j = 0; j < a.dim(); ++j) {
            const auto &c = cells[i * a.dim() + j];
            out << ' ' << std::string(width - c.size(), ' ') << c;
        }
        out << '\n';
    }
}

void csv_matrix(std::ostream &out, const std::string &name, const SquareMatrix &a)
{
    for (int i = 1; i <= a.dim(); ++i)
        for (int j = 1; j <= a.dim(); ++j)
            if (a(i, j) != Complex(0.0))
                out << name << ',' << i << ',' << j << ',' << fmt_real(a(i, j).real()) << ','
                    << fmt_real(a(i, j).imag()) << '\n';
}

std::string eta_key(const EigenvalueTag &tag)
{
    switch (tag.kind) {
    case EigenvalueTag::Kind::root: return "eta_root_" + std::to_string(tag.s);
    case EigenvalueTag::Kind::zero: return "eta_0";
    case EigenvalueTag::Kind::zero_prime: return "eta_0prime";
    }
    return "eta";
}

std::string t_key(const ExponentLabel &label)
{
    return "T_" + std::to_string(label.value) + (label.primed ? "prime" : "");
}

HierarchyCoefficients coefficients_for(const RunConfig &config)
{
    auto c = extract_coefficients(config.n);
    if (config.inject_beta_error != 0.0)
        c.beta[1][ExponentLabel{1, false}] += config.inject_beta_error;
    return c;
}

} // namespace

void validate(const RunConfig &config)
{
    if (config.n < 3 || config.n > 12)
        throw Error(ErrorCode::out_of_range, "--n must lie in [3, 12]");
    if (config.degree < 1 || config.degree > 16)
        throw Error(ErrorCode::out_of_range, "--degree must lie in [1, 16]");
    if (!(config.tolerance > 0.0 && config.tolerance < 1e-4))
        throw Error(ErrorCode::out_of_range, "--tolerance must lie in (0, 1e-4)");
    if (config.y_degree < 0 || config.y_degree > config.degree)
        throw Error(ErrorCode::out_of_range, "--y-degree must lie in [0, degree]");
}

int cmd_realization(const RunConfig &config, std::ostream &out)
{
    const int n = config.n;
    const AlgebraConfig algebra(n);
    const auto weyl = weyl_generators(n);
    const auto grading = grading_element(n);
    const auto heisenberg = heisenberg_basis(n);
    const auto s = build_involution_matrix(n);
    const auto lambda = cyclic_element(n);
    const int h = algebra.h();

    std::vector<EigenvalueTag> tags;
    for (int k = 0; k < h; ++k)
        tags.push_back(EigenvalueTag::root(k));
    tags.push_back(EigenvalueTag::zero());
    tags.push_back(EigenvalueTag::zero_prime());

    const Complex primed_prefactor = std::sqrt(n - 1.0) * kappa(n);

    if (config.format == OutputFormat::json) {
        json doc;
        doc["n"] = n;
        doc["h"] = h;
        doc["dim"] = algebra.dim();
        doc["kappa"] = to_json(kappa(n));
        doc["omega"] = to_json(primitive_root(h));
        doc["S"] = to_json(s);
        for (const char *name : {"e", "f", "h"}) {
            const auto &family = name[0] == 'e' ? weyl.e : name[0] == 'f' ? weyl.f : weyl.h;
            json list = json::array();
            for (const auto &m : family)
                list.push_back(to_json(m));
            doc["weyl"][name] = std::move(list);
        }
        doc["Lambda"] = to_json(lambda);
        doc["rho_vee"] = to_json(grading.rho_vee);
        doc["primed_prefactor"] = to_json(primed_prefactor);
        for (const auto &[label, t] : heisenberg)
            doc[t_key(label)] = to_json(t);
        for (const auto &tag : tags)
            doc[eta_key(tag)] = to_json(eta(n, tag));
        out << doc.dump(2) << '\n';
        return 0;
    }

    std::vector<std::pair<std::string, SquareMatrix>> mats{{"S", s}};
    for (int i = 0; i <= n; ++i)
        mats.emplace_back("e_" + std::to_string(i), weyl.e[i]);
    for (int i = 0; i <= n; ++i)
        mats.emplace_back("f_" + std::to_string(i), weyl.f[i]);
    for (int i = 0; i <= n; ++i)
        mats.emplace_back("h_" + std::to_string(i), weyl.h[i]);
    mats.emplace_back("Lambda", lambda);
    mats.emplace_back("rho_vee", grading.rho_vee);
    for (const auto &[label, t] : heisenberg)
        mats.emplace_back(t_key(label), t);

    if (config.format == OutputFormat::csv) {
        out << "name,row,col,re,im\n";
        for (const auto &[name, m] : mats)
            csv_matrix(out, name, m);
        for (const auto &tag : tags) {
            const auto v = eta(n, tag);
            for (Eigen::Index i = 0; i < v.size(); ++i)
                out << eta_key(tag) << ',' << i + 1 << ",1," << fmt_real(v(i).real()) << ',' << fmt_real(v(i).imag())
                    << '\n';
        }
        return 0;
    }

    out << "n = " << n << ", h = " << h << ", dim = " << algebra.dim() << ", kappa = " << fmt_complex(kappa(n))
        << ", primed prefactor = " << fmt_complex(primed_prefactor) << "\n\n";
    for (const auto &[name, m] : mats) {
        text_matrix(out, name, m);
        out << '\n';
    }
    for (const auto &tag : tags) {
        const auto v = eta(n, tag);
        out << eta_key(tag) << ":";
        for (Eigen::Index i = 0; i < v.size(); ++i)
            out << ' ' << fmt_complex(v(i));
        out << '\n';
    }
    return 0;
}

int cmd_coeffs(const RunConfig &config, std::ostream &out)
{
    const int n = config.n;
    const auto coeffs = coefficients_for(config);
    const double target = g_sum_target(n);

    struct BetaRow
    {
        int r;
        ExponentLabel label;
        Complex extracted, closed;
        double diff;
    };
    std::vector<BetaRow> beta_rows;
    double beta_max = 0.0;
    for (int r = 1; r <= n; ++r)
        for (const auto &label : exponent_labels(n)) {
            const Complex e = coeffs.beta_at(r, label);
            const Complex c = beta_closed(n, r, label);
            beta_rows.push_back({r, label, e, c, std::abs(e - c)});
            beta_max = std::max(beta_max, beta_rows.back().diff);
        }
    double g_max = 0.0;
    std::vector<Complex> g_closed_values(n + 1);
    for (int r = 1; r <= n; ++r) {
        g_closed_values[r] = g_closed(n, r);
        g_max = std::max(g_max, std::abs(coeffs.g[r] - g_closed_values[r]));
    }
    const Complex g_sum = coeffs.g_sum();
    const double sum_diff = std::abs(g_sum - target);
    const bool passed = beta_max <= config.tolerance && g_max <= config.tolerance && sum_diff <= config.tolerance;

    if (config.format == OutputFormat::json) {
        json doc;
        doc["n"] = n;
        json beta = json::array();
        for (const auto &row : beta_rows)
            beta.push_back({{"r", row.r},
                            {"label", to_string(row.label)},
                            {"extracted", to_json(row.extracted)},
                            {"closed", to_json(row.closed)},
                            {"abs_diff", row.diff}});
        doc["beta"] = std::move(beta);
        doc["beta_max_diff"] = beta_max;
        json g = json::array();
        for (int r = 1; r <= n; ++r)
            g.push_back({{"r", r},
                         {"extracted", to_json(coeffs.g[r])},
                         {"closed", to_json(g_closed_values[r])},
                         {"abs_diff", std::abs(coeffs.g[r] - g_closed_values[r])}});
        doc["g"] = std::move(g);
        doc["g_max_diff"] = g_max;
        doc["g_sum"] = to_json(g_sum);
        doc["g_sum_target"] = target;
        doc["tolerance"] = config.tolerance;
        doc["passed"] = passed;
        out << doc.dump(2) << '\n';
    } else if (config.format == OutputFormat::csv) {
        out << "r,label,beta_extracted_re,beta_extracted_im,beta_closed_re,beta_closed_im,abs_diff\n";
        for (const auto &row : beta_rows)
            out << row.r << ',' << to_string(row.label) << ',' << fmt_real(row.extracted.real()) << ','
                << fmt_real(row.extracted.imag()) << ',' << fmt_real(row.closed.real()) << ','
                << fmt_real(row.closed.imag()) << ',' << fmt_sci(row.diff) << '\n';
        out << "\nr,g_extracted_re,g_extracted_im,g_closed_re,g_closed_im,abs_diff\n";
        for (int r = 1; r <= n; ++r)
            out << r << ',' << fmt_real(coeffs.g[r].real()) << ',' << fmt_real(coeffs.g[r].imag()) << ','
                << fmt_real(g_closed_values[r].real()) << ',' << fmt_real(g_closed_values[r].imag()) << ','
                << fmt_sci(std::abs(coeffs.g[r] - g_closed_values[r])) << '\n';
        out << "\ng_sum_re,g_sum_im,target,abs_diff\n"
            << fmt_real(g_sum.real()) << ',' << fmt_real(g_sum.imag()) << ',' << fmt_real(target) << ','
            << fmt_sci(sum_diff) << '\n';
    } else {
        out << "beta (n = " << n << ")\n";
        out << "  r  label  extracted                      closed                         |diff|\n";
        char buf[256];
        for (const auto &row : beta_rows) {
            std::snprintf(buf, sizeof buf, "  %-2d %-6s %-30s %-30s %s\n", row.r, to_string(row.label).c_str(),
                          fmt_complex(row.extracted).c_str(), fmt_complex(row.closed).c_str(),
                          fmt_sci(row.diff).c_str());
            out << buf;
        }
        out << "\ng\n  r  extracted                      closed                         |diff|\n";
        for (int r = 1; r <= n; ++r) {
            std::snprintf(buf, sizeof buf, "  %-2d %-30s %-30s %s\n", r, fmt_complex(coeffs.g[r]).c_str(),
                          fmt_complex(g_closed_values[r]).c_str(),
                          fmt_sci(std::abs(coeffs.g[r] - g_closed_values[r])).c_str());
            out << buf;
        }
        out << "\nsum g = " << fmt_complex(g_sum) << ", n h (h+1)/12 = " << fmt_real(target)
            << ", |diff| = " << fmt_sci(sum_diff) << '\n';
        out << (passed ? "PASS" : "FAIL") << " (tolerance " << fmt_sci(config.tolerance) << ")\n";
    }
    return passed ? 0 : 1;
}

int cmd_equations(const RunConfig &config, std::ostream &out)
{
    const auto coeffs = coefficients_for(config);
    const auto equations = equations_emit(coeffs, config.y_degree, config.tolerance);

    if (config.format == OutputFormat::json) {
        json doc;
        doc["n"] = config.n;
        doc["y_degree"] = config.y_degree;
        json list = json::array();
        for (const auto &eq : equations) {
            json terms = json::array();
            for (const auto &t : eq.d_polynomial)
                terms.push_back({{"d_monomial", monomial_string(t.monomial, "D")},
                                 {"coefficient", to_json(t.coefficient)}});
            list.push_back({{"y_monomial", monomial_string(eq.y_monomial, "y")},
                            {"weight", monomial_weight(eq.y_monomial)},
                            {"terms", std::move(terms)},
                            {"trivial", eq.trivial}});
        }
        doc["equations"] = std::move(list);
        out << doc.dump(2) << '\n';
    } else if (config.format == OutputFormat::csv) {
        out << "y_monomial,d_monomial,coef_re,coef_im,trivial\n";
        for (const auto &eq : equations) {
            const auto y = monomial_string(eq.y_monomial, "y");
            const char *flag = eq.trivial ? "true" : "false";
            if (eq.d_polynomial.empty())
                out << y << ",,0,0," << flag << '\n';
            for (const auto &t : eq.d_polynomial)
                out << y << ',' << monomial_string(t.monomial, "D") << ',' << fmt_real(t.coefficient.real()) << ','
                    << fmt_real(t.coefficient.imag()) << ',' << flag << '\n';
        }
    } else {
        for (const auto &eq : equations) {
            out << monomial_string(eq.y_monomial, "y") << (eq.trivial ? " [trivial]" : "") << ":";
            if (eq.d_polynomial.empty())
                out << " 0";
            for (const auto &t : eq.d_polynomial)
                out << " + (" << fmt_complex(t.coefficient) << ")*" << monomial_string(t.monomial, "D");
            out << '\n';
        }
    }
    return 0;
}

int cmd_verify(const RunConfig &config, std::ostream &out)
{
    VerifyConfig vc;
    vc.n = config.n;
    vc.degree = config.degree;
    vc.tolerance = config.tolerance;
    vc.seed = config.seed;
    vc.inject_beta_error = config.inject_beta_error;
    const auto report = run_verification(vc);
    const bool passed = report.passed();

    if (config.format == OutputFormat::json) {
        json doc;
        doc["config"] = {{"n", vc.n},
                         {"degree", vc.degree},
                         {"tolerance", vc.tolerance},
                         {"seed", vc.seed},
                         {"random_pairs", vc.random_pairs}};
        if (vc.inject_beta_error != 0.0)
            doc["config"]["inject_beta_error"] = vc.inject_beta_error;
        json checks = json::array();
        for (const auto &c : report.checks) {
            json item = {{"suite", c.suite},
                         {"name", c.name},
                         {"status", c.passed ? "pass" : "fail"},
                         {"residual", c.residual},
                         {"tolerance", c.tolerance}};
            if (config.timing)
                item["elapsed_s"] = c.seconds;
            checks.push_back(std::move(item));
        }
        doc["checks"] = std::move(checks);
        doc["passed"] = passed;
        out << doc.dump(2) << '\n';
    } else if (config.format == OutputFormat::csv) {
        out << "suite,name,status,residual,tolerance" << (config.timing ? ",elapsed_s" : "") << '\n';
        for (const auto &c : report.checks) {
            out << c.suite << ',' << c.name << ',' << (c.passed ? "pass" : "fail") << ',' << fmt_sci(c.residual)
                << ',' << fmt_sci(c.tolerance);
            if (config.timing)
                out << ',' << fmt_sci(c.seconds);
            out << '\n';
        }
    } else {
        out << "verify n=" << vc.n << " degree=" << vc.degree << " tolerance=" << fmt_sci(vc.tolerance)
            << " seed=" << vc.seed << " pairs=" << vc.random_pairs << '\n';
        char buf[256];
        for (const auto &c : report.checks) {
            std::snprintf(buf, sizeof buf, "[%s] %-15s %-24s residual %s", c.passed ? "PASS" : "FAIL", c.suite.c_str(),
                          c.name.c_str(), fmt_sci(c.residual).c_str());
            out << buf;
            if (config.timing)
                out << "  " << fmt_sci(c.seconds) << " s";
            out << '\n';
        }
        out << "overall: " << (passed ? "PASS" : "FAIL") << '\n';
    }
    return passed ? 0 : 1;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"D_n^(1) principal realization and Hirota hierarchy tools", "dnkw"};
    app.require_subcommand(1);

    RunConfig config;
    std::string format = "text";

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--n", config.n, "rank n, 3..12")->capture_default_str();
        sub->add_option("--degree", config.degree, "weighted truncation degree N, 1..16")->capture_default_str();
        sub->add_option("--y-degree", config.y_degree, "y-degree bound for equations (<= degree)")
            ->capture_default_str();
        sub->add_option("--tolerance", config.tolerance, "verification tolerance in (0, 1e-4)")
            ->capture_default_str();
        sub->add_option("--seed", config.seed, "seed for random tau pairs")->capture_default_str();
        sub->add_option("--format", format, "json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text"}))
            ->capture_default_str();
        sub->add_option("--output", config.output, "write to this file instead of standard output");
        sub->add_option("--inject-beta-error", config.inject_beta_error)->group("");
        sub->add_flag("--timing", config.timing)->group("");
    };

    auto *realization = app.add_subcommand("realization", "matrix realization: S, Weyl generators, T, eta");
    auto *coeffs = app.add_subcommand("coeffs", "beta and g tables, extracted against closed form");
    auto *equations = app.add_subcommand("equations", "expanded Hirota bilinear equations");
    auto *verify = app.add_subcommand("verify", "run all verification suites");
    for (auto *sub : {realization, coeffs, equations, verify})
        add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp &e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return 2;
    }

    config.format = format == "json" ? OutputFormat::json : format == "csv" ? OutputFormat::csv : OutputFormat::text;
    try {
        validate(config);
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n' << app.help();
        return 2;
    }

    std::ofstream file;
    if (!config.output.empty()) {
        file.open(config.output, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << config.output << " for writing\n";
            return 2;
        }
    }
    std::ostream &sink = config.output.empty() ? out : file;

    try {
        if (realization->parsed())
            return cmd_realization(config, sink);
        if (coeffs->parsed())
            return cmd_coeffs(config, sink);
        if (equations->parsed())
            return cmd_equations(config, sink);
        return cmd_verify(config, sink);
    } catch (const Error &e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return 1;
    }
}

} // namespace dnkw
