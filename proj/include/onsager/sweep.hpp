#pragma once

// Frequency sweeps over a Lorentz-medium sphere with an Onsager cavity at
// its center, plus the declarative config format that drives them.
//
// Config files are INI-style:
//
//   # comment
//   [medium]
//   eps_b = 5
//   Omega = 0.5
//   gamma = 0.1
//   [geometry]
//   sphere_radius = 2          # units of c/omega0
//   onsager_radius = 0.1       # fraction of the wavelength
//   [grid]
//   omega_min = 0.2
//   omega_max = 1.8
//   count = 321
//
// See README.md for the full key list.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "onsager/dielectric.hpp"
#include "onsager/errors.hpp"
#include "onsager/rates.hpp"

namespace onsager {

enum class WavelengthMode { vacuum, medium };
enum class RmMode { equal_to_rc, explicit_value };
enum class OutputFormat { csv, json };

struct OmegaGrid {
    double min = 0.2;
    double max = 1.8;
    std::size_t count = 321;

    /// i-th point, computed as min + (max - min) * i / (count - 1) so that a
    /// 2x refined grid reproduces every original point bit for bit.
    [[nodiscard]] double at(std::size_t i) const {
        if (count == 1) return min;
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        return min + (max - min) * t;
    }
};

struct SweepConfig {
    LorentzMedium<double> medium{5.0, 1.0, 0.5, 0.1};
    std::complex<double> eps_ext{1.0, 0.0};
    double sphere_radius = 2.0;
    double onsager_radius_fraction = 0.1;
    WavelengthMode wavelength = WavelengthMode::vacuum;
    RmMode rm_mode = RmMode::equal_to_rc;
    double rm_value = 0.0;
    OmegaGrid grid;
    std::vector<std::string> columns;  // empty: all
    OutputFormat format = OutputFormat::csv;
    bool verify = false;
    unsigned threads = 0;  // 0: hardware concurrency
};

inline constexpr double kMaxCavityFraction = 0.16;
inline constexpr double kWarnCavityFraction = 0.048;

struct SweepRow {
    double omega = 0;
    ComplexPermittivity<double> medium;
    double k0_rc = 0;
    RateReport<double> report;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    Warnings warnings;
};

// ---------------------------------------------------------------- columns

struct Column {
    const char* name;
    double (*get)(const SweepRow&);
};

inline const std::vector<Column>& all_columns() {
    static const std::vector<Column> cols = {
        {"omega", [](const SweepRow& r) { return r.omega; }},
        {"eps_re", [](const SweepRow& r) { return r.medium.re(); }},
        {"eps_im", [](const SweepRow& r) { return r.medium.im(); }},
        {"eta", [](const SweepRow& r) { return r.medium.eta; }},
        {"kappa", [](const SweepRow& r) { return r.medium.kappa; }},
        {"k0_rc", [](const SweepRow& r) { return r.k0_rc; }},
        {"gamma_sc_hat", [](const SweepRow& r) { return r.report.gamma_sc_hat; }},
        {"gamma_sc_loc_hat", [](const SweepRow& r) { return r.report.gamma_sc_loc_hat; }},
        {"delta_sc_hat", [](const SweepRow& r) { return r.report.delta_sc_hat; }},
        {"gamma0_hat", [](const SweepRow& r) { return r.report.gamma0_hat; }},
        {"gamma0_nr_hat", [](const SweepRow& r) { return r.report.gamma0_nr_hat; }},
        {"gamma0_loc_hat", [](const SweepRow& r) { return r.report.gamma0_loc_hat; }},
        {"gamma0_loc_nf", [](const SweepRow& r) { return r.report.gamma0_loc_nf; }},
        {"gamma_hat", [](const SweepRow& r) { return r.report.gamma_hat; }},
        {"gamma_loc_hat", [](const SweepRow& r) { return r.report.gamma_loc_hat; }},
        {"gamma_loc_naive_hat", [](const SweepRow& r) { return r.report.gamma_loc_naive_hat; }},
        {"gamma_loc_exact_hat", [](const SweepRow& r) { return r.report.gamma_loc_exact_hat; }},
        {"w_ext_hat", [](const SweepRow& r) { return r.report.w_ext_hat; }},
        {"w_ext_loc_hat", [](const SweepRow& r) { return r.report.w_ext_loc_hat; }},
        {"onsager_factor", [](const SweepRow& r) { return r.report.onsager_factor; }},
        {"lorentz_factor", [](const SweepRow& r) { return r.report.lorentz_factor; }},
    };
    return cols;
}

inline std::vector<Column> select_columns(const std::vector<std::string>& names) {
    if (names.empty()) return all_columns();
    std::vector<Column> out;
    for (const auto& n : names) {
        const auto& all = all_columns();
        const auto it = std::find_if(all.begin(), all.end(), [&](const Column& c) { return n == c.name; });
        if (it == all.end()) throw ConfigError("output.columns", "unknown column '" + n + "'");
        out.push_back(*it);
    }
    return out;
}

// ---------------------------------------------------------------- presets

/// Parameter sets behind the three figures: eps_b = 5, Omega = 0.5, gamma =
/// 0.1, R omega0/c = 2 in air.  fig2 and fig3 use R_c = 0.1 lambda, fig4 uses
/// R_c = 0.03 lambda; R_m = R_c throughout.
inline SweepConfig preset(std::string_view name) {
    SweepConfig c;
    c.medium = {5.0, 1.0, 0.5, 0.1};
    c.eps_ext = {1.0, 0.0};
    c.sphere_radius = 2.0;
    c.rm_mode = RmMode::equal_to_rc;
    c.grid = {0.2, 1.8, 321};
    if (name == "fig2" || name == "fig3") {
        c.onsager_radius_fraction = 0.1;
    } else if (name == "fig4") {
        c.onsager_radius_fraction = 0.03;
    } else {
        throw ConfigError("--preset", "unknown preset '" + std::string(name) + "' (fig2|fig3|fig4)");
    }
    return c;
}

inline void apply_preset(SweepConfig& c, std::string_view name) {
    const SweepConfig p = preset(name);
    c.medium = p.medium;
    c.eps_ext = p.eps_ext;
    c.sphere_radius = p.sphere_radius;
    c.onsager_radius_fraction = p.onsager_radius_fraction;
    c.wavelength = p.wavelength;
    c.rm_mode = p.rm_mode;
    c.grid = p.grid;
}

// ---------------------------------------------------------------- parsing

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& v, const std::string& where) {
    double out = 0;
    const auto* first = v.data();
    const auto* last = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
        throw ConfigError(where, "expected a number, got '" + v + "'");
    }
    return out;
}

inline std::size_t parse_count(const std::string& v, const std::string& where) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError(where, "expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

inline bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(where, "expected true/false, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace detail

/// Applies `key = value` lines to `c`.  Errors name the offending line.
inline void apply_config_text(SweepConfig& c, std::istream& in, const std::string& source = "config") {
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source + ":" + std::to_string(lineno);
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(where, "malformed section header");
            section = detail::trim(std::string_view(t).substr(1, t.size() - 2));
            if (section != "medium" && section != "geometry" && section != "grid" && section != "output") {
                throw ConfigError(where, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(where, "expected key = value");
        const std::string key = detail::trim(std::string_view(t).substr(0, eq));
        const std::string val = detail::trim(std::string_view(t).substr(eq + 1));
        const std::string field = where + " (" + section + "." + key + ")";
        if (section.empty()) throw ConfigError(where, "key '" + key + "' outside any section");
        auto num = [&] { return detail::parse_double(val, field); };

        if (section == "medium") {
            if (key == "eps_b") c.medium.eps_b = num();
            else if (key == "omega0") c.medium.omega0 = num();
            else if (key == "Omega") c.medium.Omega = num();
            else if (key == "gamma") c.medium.gamma = num();
            else throw ConfigError(field, "unknown key");
        } else if (section == "geometry") {
            if (key == "eps_ext_re") c.eps_ext.real(num());
            else if (key == "eps_ext_im") c.eps_ext.imag(num());
            else if (key == "sphere_radius") c.sphere_radius = num();
            else if (key == "onsager_radius") c.onsager_radius_fraction = num();
            else if (key == "wavelength") {
                if (val == "vacuum") c.wavelength = WavelengthMode::vacuum;
                else if (val == "medium") c.wavelength = WavelengthMode::medium;
                else throw ConfigError(field, "expected vacuum|medium");
            } else if (key == "rm_mode") {
                if (val == "equal_to_rc") c.rm_mode = RmMode::equal_to_rc;
                else if (val == "explicit") c.rm_mode = RmMode::explicit_value;
                else throw ConfigError(field, "expected equal_to_rc|explicit");
            } else if (key == "rm") c.rm_value = num();
            else throw ConfigError(field, "unknown key");
        } else if (section == "grid") {
            if (key == "omega_min") c.grid.min = num();
            else if (key == "omega_max") c.grid.max = num();
            else if (key == "count") c.grid.count = detail::parse_count(val, field);
            else throw ConfigError(field, "unknown key");
        } else {
            if (key == "format") {
                if (val == "csv") c.format = OutputFormat::csv;
                else if (val == "json") c.format = OutputFormat::json;
                else throw ConfigError(field, "expected csv|json");
            } else if (key == "columns") {
                c.columns = (val == "all") ? std::vector<std::string>{} : detail::split_list(val);
            } else if (key == "verify") c.verify = detail::parse_bool(val, field);
            else if (key == "threads") c.threads = static_cast<unsigned>(detail::parse_count(val, field));
            else throw ConfigError(field, "unknown key");
        }
    }
}

inline void apply_config_file(SweepConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    apply_config_text(c, in, path);
}

/// Rejects configurations that cannot be swept; returns soft warnings.
inline Warnings validate(const SweepConfig& c) {
    Warnings w;
    try {
        c.medium.validate();
    } catch (const DomainError& e) {
        throw ConfigError("medium", e.what());
    }
    if (c.eps_ext.imag() < 0) throw ConfigError("geometry.eps_ext_im", "exterior must be passive (>= 0)");
    if (c.eps_ext == std::complex<double>(0)) throw ConfigError("geometry.eps_ext_re", "eps_ext = 0");
    if (!(c.sphere_radius > 0)) throw ConfigError("geometry.sphere_radius", "must be > 0");
    const double f = c.onsager_radius_fraction;
    if (!(f > 0) || !(f < kMaxCavityFraction)) {
        throw ConfigError("geometry.onsager_radius", "fraction of the wavelength must lie in (0, 0.16)");
    }
    if (f > kWarnCavityFraction) {
        w.add("geometry.onsager_radius: fraction " + std::to_string(f) +
              " gives k0*Rc > 0.3; small-cavity expansions are approximate");
    }
    if (c.rm_mode == RmMode::explicit_value && !(c.rm_value > 0)) {
        throw ConfigError("geometry.rm", "explicit R_m must be > 0");
    }
    if (c.grid.count < 1) throw ConfigError("grid.count", "must be >= 1");
    if (!(c.grid.min > 0)) throw ConfigError("grid.omega_min", "must be > 0");
    if (c.grid.count > 1 && !(c.grid.max > c.grid.min)) {
        throw ConfigError("grid.omega_max", "grid must be strictly increasing");
    }
    select_columns(c.columns);
    return w;
}

// ---------------------------------------------------------------- sweep

/// Onsager cavity radius at frequency omega (lengths in c/omega0).
inline double cavity_radius(const SweepConfig& c, double omega, const ComplexPermittivity<double>& m) {
    double lambda = 2.0 * std::numbers::pi / omega;
    if (c.wavelength == WavelengthMode::medium) lambda /= m.eta;
    return c.onsager_radius_fraction * lambda;
}

inline SweepRow compute_row(const SweepConfig& c, double omega, Warnings* warn = nullptr) {
    SweepRow row;
    row.omega = omega;
    row.medium = eval_lorentz(c.medium, omega);
    const double k0 = omega;
    Geometry<double> g;
    g.eps_ext = c.eps_ext;
    g.sphere_radius = c.sphere_radius;
    g.cavity_radius = cavity_radius(c, omega, row.medium);
    g.rm = (c.rm_mode == RmMode::equal_to_rc) ? g.cavity_radius : c.rm_value;
    row.k0_rc = k0 * g.cavity_radius;
    if (warn != nullptr && !(g.cavity_radius < g.sphere_radius)) {
        warn->add("cavity radius reaches the sphere radius at low omega; gamma_loc_exact_hat is nan there");
    }
    row.report = rate_report(row.medium, k0, g, warn);
    return row;
}

/// Rows are pure functions of (config, omega); they are computed in
/// parallel and stored in grid order.
inline SweepResult run_sweep(const SweepConfig& c) {
    SweepResult res;
    res.warnings = validate(c);
    const std::size_t n = c.grid.count;
    res.rows.resize(n);
    unsigned workers = c.threads != 0 ? c.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

    std::vector<Warnings> local(workers);
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](unsigned w) {
        try {
            for (std::size_t i = w; i < n; i += workers) {
                res.rows[i] = compute_row(c, c.grid.at(i), &local[w]);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    for (const auto& l : local) {
        for (const auto& m : l.messages) res.warnings.add(m);
    }
    return res;
}

// ---------------------------------------------------------------- output

/// Shortest-form-independent rendering: always 17 significant digits.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

inline void write_csv(std::ostream& out, const SweepResult& res, const std::vector<std::string>& names) {
    const auto cols = select_columns(names);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << cols[i].name;
    }
    out << '\n';
    for (const auto& row : res.rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            out << (i ? "," : "") << format_number(cols[i].get(row));
        }
        out << '\n';
    }
}

inline void write_json(std::ostream& out, const SweepResult& res, const std::vector<std::string>& names) {
    const auto cols = select_columns(names);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : res.rows) {
        nlohmann::ordered_json obj;
        for (const auto& c : cols) {
            const double v = c.get(row);
            if (std::isnan(v)) obj[c.name] = nullptr;
            else obj[c.name] = v;
        }
        arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
}

}  // namespace onsager
