#include "fqsalem/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fqsalem/detail/numeric.hpp"

namespace fqsalem {
namespace {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

CFun CFun::parse(const std::string& text) {
    CFun c;
    if (text == "log") {
        c.kind = Kind::kLog;
    } else if (text == "loglog") {
        c.kind = Kind::kLogLog;
    } else if (text.rfind("const:", 0) == 0) {
        c.kind = Kind::kConst;
        c.value = std::stod(text.substr(6));
    } else {
        throw std::invalid_argument("threshold function must be const:<c>, log, or loglog");
    }
    return c;
}

double CFun::operator()(double q) const {
    switch (kind) {
        case Kind::kConst: return value;
        case Kind::kLog: return std::log(q);
        case Kind::kLogLog: return std::log(std::log(q));
    }
    return value;
}

std::string CFun::str() const {
    switch (kind) {
        case Kind::kConst: return "const:" + fmt_double(value);
        case Kind::kLog: return "log";
        case Kind::kLogLog: return "loglog";
    }
    return "";
}

std::string ExperimentConfig::canonical() const {
    std::string s = "recipe=" + recipe + ";d=" + std::to_string(dim) + ";q=";
    for (std::size_t i = 0; i < q_grid.size(); ++i) s += (i ? "," : "") + q_grid[i];
    s += ";p=";
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        s += (i ? "," : "") + format_p(p_grid[i]);
    s += ";band=" + fmt_double(band_lo) + "," + fmt_double(band_hi);
    s += ";slope=" + fmt_double(slope_max);
    s += ";trials=" + std::to_string(trials) + ";seed=" + std::to_string(seed);
    s += ";alpha=" + fmt_double(alpha) + ";mcp=" + format_p(mc_p);
    s += ";cfun=" + cfun.str() + ";maxexc=" + fmt_double(max_exceedance);
    return s;
}

void ExperimentConfig::validate() const {
    if (q_grid.empty()) throw std::invalid_argument("empty q-grid");
    if (!(band_lo <= 1.0 && 1.0 <= band_hi))
        throw std::invalid_argument("band must satisfy lo <= 1 <= hi");
    for (const std::string& spec : q_grid) Field::parse(spec);  // early validation
    for (std::size_t i = 1; i < p_grid.size(); ++i)
        if (!(p_grid[i] >= p_grid[i - 1]))
            throw std::invalid_argument("p grid must be ascending");
}

bool RunRecord::all_pass() const {
    if (!errors.empty()) return false;
    for (const auto& a : assertions)
        if (!a.pass) return false;
    return true;
}

std::string RunRecord::to_json() const {
    std::string out = "{\"config_hash\":\"" + config_hash + "\",\"version\":\"" +
                      library_version + "\",\"cells\":[";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        if (i) out += ',';
        out += "{\"field\":\"" + c.field_spec + "\",\"q\":" + fmt_double(c.q) +
               ",\"set_size\":" + std::to_string(c.set_size) +
               ",\"trial\":" + std::to_string(c.trial) + ",\"p\":\"" + format_p(c.p) +
               "\",\"lp\":" + fmt_double(c.lp) + ",\"s_emp\":" + fmt_double(c.s_emp) +
               ",\"s_theory\":" + fmt_double(c.s_theory) +
               ",\"predicted\":" + fmt_double(c.predicted) +
               ",\"ratio\":" + fmt_double(c.ratio) +
               ",\"in_band\":" + (c.in_band ? "true" : "false") + "}";
    }
    out += "],\"assertions\":[";
    for (std::size_t i = 0; i < assertions.size(); ++i) {
        const auto& a = assertions[i];
        if (i) out += ',';
        out += "{\"id\":\"" + json_escape(a.id) + "\",\"pass\":" + (a.pass ? "true" : "false") +
               ",\"value\":" + fmt_double(a.value) + ",\"detail\":\"" + json_escape(a.detail) +
               "\"}";
    }
    out += "],\"errors\":[";
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (i) out += ',';
        out += "{\"field\":\"" + json_escape(errors[i].field_spec) + "\",\"message\":\"" +
               json_escape(errors[i].message) + "\"}";
    }
    return out + "]}";
}

namespace {

struct SweepCell {
    bool ok = false;
    std::string error;
    double q = 0;
    std::uint64_t set_size = 0;
    std::vector<CellMeasurement> rows;
    double closed_form_residual = -1.0;  // < 0 when no closed form attached
};

SweepCell run_sweep_cell(const ExperimentConfig& cfg, const std::string& qspec) {
    SweepCell cell;
    try {
        const Field field = Field::parse(qspec);
        const Ambient amb(field, cfg.dim);
        const BuiltSet built = build_recipe(amb, cfg.recipe);
        cell.q = static_cast<double>(field.q());
        cell.set_size = built.set.size();

        const FourierTable table = fourier_transform(built.set);
        for (double p : cfg.p_grid) {
            CellMeasurement row;
            row.field_spec = field.spec_string();
            row.q = cell.q;
            row.set_size = built.set.size();
            row.p = p;
            row.lp = lp_norm(table, p);
            row.s_emp = built.set.size() >= 2
                            ? salem_exponent_from(row.lp, amb.size, built.set.size())
                            : std::numeric_limits<double>::quiet_NaN();
            if (built.s_theory) {
                row.s_theory = built.s_theory(p);
                row.predicted = std::pow(static_cast<double>(built.set.size()),
                                         1.0 - row.s_theory) /
                                static_cast<double>(amb.size);
                row.ratio = row.lp / row.predicted;
                row.in_band = row.ratio >= cfg.band_lo && row.ratio <= cfg.band_hi;
            } else {
                row.s_theory = std::numeric_limits<double>::quiet_NaN();
                row.predicted = std::numeric_limits<double>::quiet_NaN();
                row.ratio = std::numeric_limits<double>::quiet_NaN();
                row.in_band = true;
            }
            cell.rows.push_back(row);
        }

        if (built.closed_form) {
            double worst = 0.0;
            const auto& cf = *built.closed_form;
            const double at_zero = static_cast<double>(built.set.size()) /
                                   static_cast<double>(amb.size);
            for (std::uint64_t i = 0; i < amb.size; ++i) {
                const double expected =
                    i == 0 ? at_zero : (cf.support.contains(i) ? cf.magnitude : 0.0);
                worst = std::max(worst, std::abs(std::abs(table.values()[i]) - expected));
            }
            cell.closed_form_residual = worst;
        }
        cell.ok = true;
    } catch (const std::exception& e) {
        cell.error = e.what();
    }
    return cell;
}

}  // namespace

RunRecord sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    RunRecord rec;
    rec.config_hash = fmt_hex(detail::fnv1a64(cfg.canonical()));
    rec.library_version = kLibraryVersion;

    std::vector<SweepCell> cells(cfg.q_grid.size());
    detail::parallel_for(cfg.q_grid.size(), cfg.workers,
                         [&](std::uint64_t lo, std::uint64_t hi) {
                             for (std::uint64_t i = lo; i < hi; ++i)
                                 cells[i] = run_sweep_cell(cfg, cfg.q_grid[i]);
                         });

    for (std::size_t i = 0; i < cells.size(); ++i) {
        const SweepCell& cell = cells[i];
        if (!cell.ok) {
            rec.errors.push_back({cfg.q_grid[i], cell.error});
            continue;
        }
        for (const auto& row : cell.rows) {
            rec.cells.push_back(row);
            if (!std::isnan(row.s_theory)) {
                AssertionResult a;
                a.id = "band:q=" + row.field_spec + ":p=" + format_p(row.p);
                a.pass = row.in_band;
                a.value = row.ratio;
                a.detail = "ratio within [" + fmt_double(cfg.band_lo) + "," +
                           fmt_double(cfg.band_hi) + "]";
                rec.assertions.push_back(a);
            }
        }
        if (cell.closed_form_residual >= 0.0) {
            AssertionResult a;
            a.id = "closed-form:q=" + cfg.q_grid[i];
            a.pass = cell.closed_form_residual < 1e-9;
            a.value = cell.closed_form_residual;
            a.detail = "max entrywise |.| deviation from the exact spectrum";
            rec.assertions.push_back(a);
        }
    }

    // Slope of log ratio against log q per p: a wrong exponent drifts
    // geometrically across the grid, a correct one stays flat.
    for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
        std::vector<double> xs, ys;
        for (const auto& row : rec.cells) {
            if (row.p != cfg.p_grid[pi] || std::isnan(row.ratio) || row.ratio <= 0.0)
                continue;
            xs.push_back(std::log(row.q));
            ys.push_back(std::log(row.ratio));
        }
        if (xs.size() >= 2) {
            const double slope = fit_log_slope(xs, ys);
            AssertionResult a;
            a.id = "slope:p=" + format_p(cfg.p_grid[pi]);
            a.pass = std::abs(slope) <= cfg.slope_max;
            a.value = slope;
            a.detail = "|log-ratio slope| <= " + fmt_double(cfg.slope_max);
            rec.assertions.push_back(a);
        }
    }

    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    return rec;
}

RunRecord monte_carlo(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.trials < 1) throw std::invalid_argument("monte carlo needs trials >= 1");
    const auto start = std::chrono::steady_clock::now();

    RunRecord rec;
    rec.config_hash = fmt_hex(detail::fnv1a64(cfg.canonical()));
    rec.library_version = kLibraryVersion;

    for (const std::string& qspec : cfg.q_grid) {
        const Field field = Field::parse(qspec);
        const Ambient amb(field, cfg.dim);
        const double q = static_cast<double>(field.q());
        const double threshold = cfg.cfun(q) * std::pow(q, cfg.alpha / 2.0) /
                                 static_cast<double>(amb.size);
        const std::uint64_t base = detail::splitmix64(
            cfg.seed ^ detail::fnv1a64(field.spec_string() + "#" + std::to_string(cfg.dim)));

        std::vector<CellMeasurement> rows(cfg.trials);
        detail::parallel_for(cfg.trials, cfg.workers,
                             [&](std::uint64_t lo, std::uint64_t hi) {
                                 for (std::uint64_t t = lo; t < hi; ++t) {
                                     const std::uint64_t trial_seed =
                                         detail::splitmix64(base + t);
                                     const PointSet x = random_set(amb, cfg.alpha, trial_seed);
                                     const FourierTable table = fourier_transform(x);
                                     CellMeasurement row;
                                     row.field_spec = field.spec_string();
                                     row.q = q;
                                     row.set_size = x.size();
                                     row.trial = t;
                                     row.p = cfg.mc_p;
                                     row.lp = lp_norm(table, cfg.mc_p);
                                     row.s_emp = x.size() >= 2
                                                     ? salem_exponent_from(row.lp, amb.size,
                                                                           x.size())
                                                     : std::numeric_limits<double>::quiet_NaN();
                                     row.s_theory = std::numeric_limits<double>::quiet_NaN();
                                     row.predicted = threshold;
                                     row.ratio = row.lp / threshold;
                                     row.in_band = row.lp <= threshold;
                                     rows[t] = row;
                                 }
                             });

        std::uint64_t exceed = 0;
        for (const auto& row : rows) {
            if (!row.in_band) ++exceed;
            rec.cells.push_back(row);
        }
        const double freq = static_cast<double>(exceed) / static_cast<double>(cfg.trials);
        const WilsonInterval ci = wilson_interval(exceed, cfg.trials);
        AssertionResult a;
        a.id = "mc-exceedance:q=" + field.spec_string();
        a.pass = cfg.max_exceedance < 0.0 || freq < cfg.max_exceedance;
        a.value = freq;
        a.detail = "wilson95=[" + fmt_double(ci.lo) + "," + fmt_double(ci.hi) + "] threshold=" +
                   fmt_double(threshold);
        rec.assertions.push_back(a);
    }

    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    return rec;
}

std::string sweep_csv(const RunRecord& rec, const ExperimentConfig& cfg) {
    std::string out =
        "field,q,d,recipe,set_size,trial,p,lp_norm,s_emp,s_theory,predicted,ratio,"
        "band_lo,band_hi,in_band\n";
    for (const auto& c : rec.cells) {
        out += c.field_spec + "," + fmt_double(c.q) + "," + std::to_string(cfg.dim) + "," +
               csv_field(cfg.recipe) + "," + std::to_string(c.set_size) + "," +
               std::to_string(c.trial) +
               "," + format_p(c.p) + "," + fmt_double(c.lp) + "," + fmt_double(c.s_emp) + "," +
               fmt_double(c.s_theory) + "," + fmt_double(c.predicted) + "," +
               fmt_double(c.ratio) + "," + fmt_double(cfg.band_lo) + "," +
               fmt_double(cfg.band_hi) + "," + (c.in_band ? "1" : "0") + "\n";
    }
    return out;
}

double fit_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n < 2 || xs.size() != ys.size())
        throw std::invalid_argument("slope fit needs at least two points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    if (den == 0) throw std::invalid_argument("slope fit needs distinct x values");
    return num / den;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace fqsalem
