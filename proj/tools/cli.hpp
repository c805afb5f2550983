#pragma once

#include <hyperheat/hyperheat.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace hyperheat::cli {

enum class Command { kernel, trace, coeffs, fourier, action, verify };
enum class Sector { scalar, u1, ghost_subtracted };
enum class Format { csv, json };
enum class KernelMethod { automatic, spectral, descent };

enum ExitCode { exit_ok = 0, exit_config = 2, exit_numeric = 3, exit_verification = 4 };

struct RunConfig {
    Command command = Command::kernel;
    int n = 3;
    double mass = 0.0;
    std::vector<double> r{0.0};
    std::vector<double> t{1.0};
    std::vector<double> lambda{1.0};
    std::vector<double> cutoff{10.0};
    Sector sector = Sector::scalar;
    Format format = Format::csv;
    KernelMethod method = KernelMethod::automatic;
    int series_order = 4;
    double split_tol = 0.0;  // 0 disables the split-exactness check in `action`
    std::vector<int> checks;
    unsigned threads = 1;
};

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    int status = exit_ok;
};

inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline const char* to_string(Sector s) {
    switch (s) {
        case Sector::scalar: return "scalar";
        case Sector::u1: return "u1";
        case Sector::ghost_subtracted: return "ghost_subtracted";
    }
    return "unknown";
}

// "a,b,c" or "start:stop:count" (count >= 2, endpoints included).
inline std::vector<double> parse_grid(const std::string& spec, const std::string& name) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty() || !std::isfinite(v)) throw config_error(name + ": cannot parse '" + s + "'");
        return v;
    };
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw config_error(name + ": range must be start:stop:count");
        double a = number(parts[0]), b = number(parts[1]);
        double c = number(parts[2]);
        if (c != std::floor(c) || c < 2 || c > 1e6) throw config_error(name + ": range count must be an integer >= 2");
        const int count = static_cast<int>(c);
        for (int i = 0; i < count; ++i) out.push_back(i + 1 == count ? b : a + (b - a) * i / (count - 1));
    } else {
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
        if (!spec.empty() && spec.back() == ',') throw config_error(name + ": trailing comma");
    }
    if (out.empty()) throw config_error(name + ": empty grid");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1])) throw config_error(name + ": grid must be strictly increasing");
    return out;
}

inline void require_positive(const std::vector<double>& g, const std::string& name) {
    for (double v : g)
        if (!(v > 0.0)) throw config_error(name + ": values must be positive");
}

inline void require_non_negative(const std::vector<double>& g, const std::string& name) {
    for (double v : g)
        if (!(v >= 0.0)) throw config_error(name + ": values must be non-negative");
}

inline void validate(const RunConfig& c) {
    const bool kernel_p1 = c.command == Command::kernel && c.n == 1;
    if (c.command != Command::verify && c.n < 2 && !kernel_p1)
        throw config_error("--dim must be >= 2 (1 is accepted by `kernel` only)");
    if (!(c.mass >= 0.0) || !std::isfinite(c.mass)) throw config_error("--mass must be finite and non-negative");
    if (c.threads < 1 || c.threads > 256) throw config_error("--threads must lie in [1, 256]");
    switch (c.command) {
        case Command::kernel:
            require_non_negative(c.r, "--r");
            require_positive(c.t, "--t");
            if (c.method == KernelMethod::spectral && c.n % 2 == 0) throw config_error("--method spectral needs odd --dim");
            if (c.method != KernelMethod::automatic && c.n == 1) throw config_error("--dim 1 supports the closed form only");
            break;
        case Command::trace:
            require_positive(c.t, "--t");
            break;
        case Command::fourier:
            require_positive(c.lambda, "--lambda");
            require_non_negative(c.r, "--r");
            break;
        case Command::action:
            require_positive(c.cutoff, "--cutoff");
            if (c.split_tol < 0.0) throw config_error("--split-tol must be non-negative");
            if (c.split_tol > 0.0 && c.sector != Sector::scalar) throw config_error("--split-tol applies to the scalar sector only");
            break;
        case Command::coeffs:
            if (c.series_order < 2 || c.series_order > 40) throw config_error("--order must lie in [2, 40]");
            break;
        case Command::verify:
            for (int id : c.checks)
                if (id < 1 || id > 12) throw config_error("--check ids lie in [1, 12]");
            break;
    }
    if ((c.command == Command::trace || c.command == Command::action) && c.sector != Sector::scalar && c.n != 3)
        throw config_error("the u1 and ghost_subtracted sectors are available for --dim 3 only");
}

// Evaluates f(i) for i in [0, count) on up to `threads` workers; rows come back in index order.
inline std::vector<std::vector<Cell>> evaluate_rows(std::size_t count, unsigned threads,
                                                    const std::function<std::vector<Cell>(std::size_t)>& f) {
    std::vector<std::vector<Cell>> rows(count);
    std::vector<std::exception_ptr> errors(count);
    auto work = [&](unsigned w, unsigned stride) {
        for (std::size_t i = w; i < count; i += stride) {
            try {
                rows[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

inline double kernel_value(const RunConfig& c, double r, double t, std::string& method) {
    if (c.n == 1) {
        method = hyperheat::to_string(Method::closed_form);
        return massive(p1(r, t), c.mass).value;
    }
    const DimensionParams p(c.n, c.mass);
    KernelValue v;
    switch (c.method) {
        case KernelMethod::automatic: v = kernel(p, r, t); break;
        case KernelMethod::spectral: v = massive(spectral_kernel(DimensionParams(c.n), r, t), c.mass); break;
        case KernelMethod::descent: v = massive(descend(DimensionParams(c.n + 1), r, t), c.mass); break;
    }
    method = hyperheat::to_string(v.method);
    return v.value;
}

inline double trace_value(const RunConfig& c, double t) {
    const DimensionParams p(c.n, c.mass);
    switch (c.sector) {
        case Sector::scalar: return kernel(p, 0.0, t).value;
        case Sector::u1: return u1_trace(DimensionParams(c.n), c.mass, t);
        case Sector::ghost_subtracted: return ghost_subtracted_partition_trace(DimensionParams(c.n), c.mass, t);
    }
    return 0.0;
}

inline Table run_kernel(const RunConfig& c) {
    Table tab{"kernel", {"n", "m", "r", "t", "value", "method"}, {}};
    std::vector<std::pair<double, double>> grid;
    for (double r : c.r)
        for (double t : c.t) grid.emplace_back(r, t);
    tab.rows = evaluate_rows(grid.size(), c.threads, [&](std::size_t i) {
        auto [r, t] = grid[i];
        std::string method;
        double v = kernel_value(c, r, t, method);
        return std::vector<Cell>{static_cast<long long>(c.n), c.mass, r, t, v, method};
    });
    return tab;
}

inline Table run_trace(const RunConfig& c) {
    Table tab{"trace", {"n", "m", "sector", "t", "value"}, {}};
    tab.rows = evaluate_rows(c.t.size(), c.threads, [&](std::size_t i) {
        double t = c.t[i];
        return std::vector<Cell>{static_cast<long long>(c.n), c.mass, std::string(to_string(c.sector)), t, trace_value(c, t)};
    });
    return tab;
}

inline Table run_coeffs(const RunConfig& c) {
    Table tab{"coeffs", {"n", "sector", "series", "l", "value", "decimal"}, {}};
    const DimensionParams p(c.n);
    auto add = [&](const std::string& series, int l, const Rational& q) {
        tab.rows.push_back({static_cast<long long>(c.n), std::string(to_string(c.sector)), series, static_cast<long long>(l),
                            hyperheat::to_string(q), to_double(q)});
    };
    switch (c.sector) {
        case Sector::scalar: {
            ScalarCoincidence s = scalar_coincidence(p);
            add("b_tilde", 0, s.b0);
            add("b_tilde", 1, s.b1);
            add("b_tilde", 2, s.b2);
            if (p.odd()) {
                RationalSeries a = extract_a_coeffs(p.k());
                for (int l = 0; l <= a.order(); ++l) add("a", l, a.coeffs[l]);
            } else {
                RationalSeries e = even_coincidence_series(c.n, c.series_order);
                for (int l = 0; l <= e.order(); ++l) add("coincidence", l, e.coeffs[l]);
            }
            break;
        }
        case Sector::u1: {
            U1Coincidence u = u1_coincidence(p);
            add("factor", 0, u.f0);
            add("factor", 1, u.f1);
            add("factor", 2, u.f2);
            add("trace", 0, u.tr0);
            add("trace", 1, u.tr1);
            add("trace", 2, u.tr2);
            break;
        }
        case Sector::ghost_subtracted: {
            TraceTriple g = ghost_subtracted_traces(p);
            add("trace", 0, g.tr0);
            add("trace", 1, g.tr1);
            add("trace", 2, g.tr2);
            break;
        }
    }
    return tab;
}

inline Table run_fourier(const RunConfig& c) {
    Table tab{"fourier", {"n", "lambda", "r", "phi", "c_abs_squared"}, {}};
    const DimensionParams p(c.n);
    std::vector<std::pair<double, double>> grid;
    for (double l : c.lambda)
        for (double r : c.r) grid.emplace_back(l, r);
    tab.rows = evaluate_rows(grid.size(), c.threads, [&](std::size_t i) {
        auto [l, r] = grid[i];
        double cabs = p.odd() ? c_abs_squared(p, l) : std::norm(c_function(p, l));
        return std::vector<Cell>{static_cast<long long>(c.n), l, r, phi_lambda(p, l, r), cabs};
    });
    return tab;
}

// Small-t monomials of the n = 3 vector traces, (4 pi)^{-3/2} (c0 t^{-3/2} + c1 t^{-1/2}).
inline std::vector<Monomial> u1_monomials(Sector s, double m) {
    const double norm = std::pow(4.0 * pi, -1.5);
    const double m2 = m * m;
    if (s == Sector::u1) return {{-1.5, 3.0 * norm}, {-0.5, (3.0 - 3.0 * m2) * norm}};
    return {{-1.5, 1.0 * norm}, {-0.5, (5.0 - 3.0 * m2) * norm}};
}

inline Table run_action(const RunConfig& c) {
    Table tab{"action", {"n", "m", "sector", "cutoff", "divergent", "regular", "total", "log_coefficient"}, {}};
    if (c.split_tol > 0.0) tab.columns.push_back("split_deviation");
    const DimensionParams p(c.n, c.mass);
    std::vector<int> failed(c.cutoff.size(), 0);
    tab.rows = evaluate_rows(c.cutoff.size(), c.threads, [&](std::size_t i) {
        const double L = c.cutoff[i];
        ActionDecomposition d;
        if (c.sector == Sector::scalar) {
            d = p.odd() ? w_odd_decomposition(p, c.mass, L) : w_even_decomposition(p, c.mass, L);
        } else {
            const Sector s = c.sector;
            const double m = c.mass;
            auto tr = [s, m](double t) {
                const DimensionParams h3(3);
                return s == Sector::u1 ? u1_trace(h3, m, t) : ghost_subtracted_partition_trace(h3, m, t);
            };
            d = w_from_trace(tr, L, u1_monomials(s, m), DimensionParams(3), m);
        }
        double div = d.divergent_density(L);
        std::vector<Cell> row{static_cast<long long>(c.n), c.mass, std::string(to_string(c.sector)), L, div,
                              d.regular_density, div + d.regular_density, d.log_coefficient};
        if (c.split_tol > 0.0) {
            double dev = split_exactness(d, L);
            failed[i] = dev > c.split_tol;
            row.push_back(dev);
        }
        return row;
    });
    for (int f : failed)
        if (f) tab.status = exit_verification;
    return tab;
}

inline Table run_verify(const RunConfig& c) {
    Table tab{"verify", {"id", "name", "passed", "measured", "tolerance", "detail"}, {}};
    std::vector<int> ids = c.checks;
    if (ids.empty())
        for (int i = 1; i <= 12; ++i) ids.push_back(i);
    tab.rows = evaluate_rows(ids.size(), c.threads, [&](std::size_t i) {
        CheckResult r = run_check(ids[i]);
        return std::vector<Cell>{static_cast<long long>(r.id), r.name, r.passed, r.measured, r.tolerance, r.detail};
    });
    for (const auto& row : tab.rows)
        if (!std::get<bool>(row[2])) tab.status = exit_verification;
    return tab;
}

inline Table run(const RunConfig& c) {
    validate(c);
    switch (c.command) {
        case Command::kernel: return run_kernel(c);
        case Command::trace: return run_trace(c);
        case Command::coeffs: return run_coeffs(c);
        case Command::fourier: return run_fourier(c);
        case Command::action: return run_action(c);
        case Command::verify: return run_verify(c);
    }
    throw config_error("unknown command");
}

inline std::string cell_text(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) return format_number(v);
            else if constexpr (std::is_same_v<V, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<V, bool>) return v ? "true" : "false";
            else return v;
        },
        cell);
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

inline void write_csv(const Table& t, std::ostream& os) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
        os << '\n';
    }
}

// Numbers are written with the CSV formatting; the json library only escapes strings.
inline std::string json_cell(const Cell& cell) {
    if (const double* d = std::get_if<double>(&cell)) return std::isfinite(*d) ? format_number(*d) : "null";
    if (const std::string* s = std::get_if<std::string>(&cell)) return nlohmann::json(*s).dump();
    return cell_text(cell);
}

inline void write_json(const Table& t, std::ostream& os) {
    os << "{\"command\":" << nlohmann::json(t.command).dump() << ",\"rows\":[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        os << (r ? "," : "") << "\n{";
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? "," : "") << nlohmann::json(t.columns[i]).dump() << ":" << json_cell(t.rows[r][i]);
        os << "}";
    }
    os << "\n]}\n";
}

inline void write(const Table& t, Format f, std::ostream& os) {
    if (f == Format::csv) write_csv(t, os);
    else write_json(t, os);
}

// Full front end: parse, run, emit. Returns the process exit status.
inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heat kernels, spectral data and one-loop actions on hyperbolic space"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string r_grid, t_grid, lambda_grid, cutoff_grid;
    bool all = false;

    const std::map<std::string, Sector> sectors{
        {"scalar", Sector::scalar}, {"u1", Sector::u1}, {"ghost_subtracted", Sector::ghost_subtracted}};
    const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};
    const std::map<std::string, KernelMethod> methods{
        {"auto", KernelMethod::automatic}, {"spectral", KernelMethod::spectral}, {"descent", KernelMethod::descent}};

    auto common = [&](CLI::App* sub, bool with_mass) {
        sub->add_option("--dim,-n", cfg.n, "dimension of H^n")->capture_default_str();
        if (with_mass) sub->add_option("--mass,-m", cfg.mass, "mass")->capture_default_str();
        sub->add_option("--format", cfg.format, "csv or json")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
        sub->add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
    };

    auto* kernel_cmd = app.add_subcommand("kernel", "heat kernel p_n(r, t)");
    common(kernel_cmd, true);
    kernel_cmd->add_option("--r", r_grid, "radii: list a,b,c or start:stop:count")->required();
    kernel_cmd->add_option("--t", t_grid, "times")->required();
    kernel_cmd->add_option("--method", cfg.method, "auto, spectral or descent")
        ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));

    auto* trace_cmd = app.add_subcommand("trace", "coincident kernel trace per unit volume");
    common(trace_cmd, true);
    trace_cmd->add_option("--t", t_grid, "times")->required();
    trace_cmd->add_option("--sector", cfg.sector, "scalar, u1 or ghost_subtracted")
        ->transform(CLI::CheckedTransformer(sectors, CLI::ignore_case));

    auto* coeffs_cmd = app.add_subcommand("coeffs", "exact small-t coefficients");
    common(coeffs_cmd, false);
    coeffs_cmd->add_option("--sector", cfg.sector, "scalar, u1 or ghost_subtracted")
        ->transform(CLI::CheckedTransformer(sectors, CLI::ignore_case));
    coeffs_cmd->add_option("--order", cfg.series_order, "coincidence series order for even n")->capture_default_str();

    auto* fourier_cmd = app.add_subcommand("fourier", "spherical functions and |c(lambda)|^2");
    common(fourier_cmd, false);
    fourier_cmd->add_option("--lambda", lambda_grid, "spectral parameters")->required();
    fourier_cmd->add_option("--r", r_grid, "radii");

    auto* action_cmd = app.add_subcommand("action", "one-loop density split at cutoff Lambda");
    common(action_cmd, true);
    action_cmd->add_option("--cutoff", cutoff_grid, "UV cutoffs Lambda")->required();
    action_cmd->add_option("--sector", cfg.sector, "scalar, u1 or ghost_subtracted")
        ->transform(CLI::CheckedTransformer(sectors, CLI::ignore_case));
    action_cmd->add_option("--split-tol", cfg.split_tol, "check divergent + regular against the direct cutoff integral");

    auto* verify_cmd = app.add_subcommand("verify", "acceptance checks 1-12");
    verify_cmd->add_flag("--all", all, "run every check (default)");
    verify_cmd->add_option("--check", cfg.checks, "check ids to run");
    verify_cmd->add_option("--format", cfg.format, "csv or json")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    verify_cmd->add_option("--threads", cfg.threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }

    try {
        if (app.got_subcommand(kernel_cmd)) cfg.command = Command::kernel;
        else if (app.got_subcommand(trace_cmd)) cfg.command = Command::trace;
        else if (app.got_subcommand(coeffs_cmd)) cfg.command = Command::coeffs;
        else if (app.got_subcommand(fourier_cmd)) cfg.command = Command::fourier;
        else if (app.got_subcommand(action_cmd)) cfg.command = Command::action;
        else cfg.command = Command::verify;
        if (all && !cfg.checks.empty()) throw config_error("--all and --check are exclusive");
        if (!r_grid.empty()) cfg.r = parse_grid(r_grid, "--r");
        if (!t_grid.empty()) cfg.t = parse_grid(t_grid, "--t");
        if (!lambda_grid.empty()) cfg.lambda = parse_grid(lambda_grid, "--lambda");
        if (!cutoff_grid.empty()) cfg.cutoff = parse_grid(cutoff_grid, "--cutoff");
        Table t = run(cfg);
        write(t, cfg.format, out);
        return t.status;
    } catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return exit_numeric;
    }
}

}  // namespace hyperheat::cli
