#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fqsalem/charsums.hpp"
#include "fqsalem/constructions.hpp"
#include "fqsalem/geometry.hpp"
#include "fqsalem/harness.hpp"
#include "fqsalem/lattice.hpp"
#include "fqsalem/spectrum.hpp"

namespace {

using namespace fqsalem;

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ',') {
            if (i > start) out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::vector<double> parse_p_list(const std::string& s) {
    std::vector<double> out;
    for (const std::string& tok : split_csv(s)) out.push_back(parse_p(tok));
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

void print_record(const RunRecord& rec) {
    for (const auto& a : rec.assertions)
        std::printf("[%s] %-40s value=%.6g  %s\n", a.pass ? "PASS" : "FAIL", a.id.c_str(),
                    a.value, a.detail.c_str());
    for (const auto& e : rec.errors)
        std::printf("[ERROR] q=%s: %s\n", e.field_spec.c_str(), e.message.c_str());
    std::printf("config %s: %zu cells, %zu assertions, %s (%.1f ms)\n",
                rec.config_hash.c_str(), rec.cells.size(), rec.assertions.size(),
                rec.all_pass() ? "all pass" : "FAILURES", rec.wall_ms);
}

int cmd_construct(const std::string& recipe, const std::string& field, std::uint32_t d,
                  const std::string& out_path) {
    const Ambient amb(Field::parse(field), d);
    const BuiltSet built = build_recipe(amb, recipe);
    save_set(built.set, out_path, built.label);
    std::printf("%s over %s^%u: %llu points -> %s\n", built.label.c_str(),
                amb.field.spec_string().c_str(), d,
                static_cast<unsigned long long>(built.set.size()), out_path.c_str());
    for (const auto& note : built.notes) std::printf("note: %s\n", note.c_str());
    return 0;
}

int cmd_spectrum(const std::string& in_path, const std::string& p_list,
                 const std::string& csv_path) {
    std::string name;
    const PointSet set = load_set(in_path, &name);
    const SpectralProfile prof = spectral_profile(set, parse_p_list(p_list), name);
    std::printf("%s over %s^%u, #E=%llu\n", name.empty() ? "set" : name.c_str(),
                prof.field_spec.c_str(), prof.dim,
                static_cast<unsigned long long>(prof.set_size));
    std::printf("%8s %14s %10s %14s %14s %14s\n", "p", "lp_norm", "s_emp", "trivial",
                "interp", "lower");
    for (const auto& r : prof.records)
        std::printf("%8s %14.6e %10.4f %14.6e %14.6e %14.6e\n", format_p(r.p).c_str(), r.lp,
                    r.s_emp, r.bounds.trivial, r.bounds.interpolation, r.bounds.lower);
    if (!csv_path.empty()) write_file(csv_path, profile_csv(prof));
    return 0;
}

int cmd_sweep(ExperimentConfig cfg, const std::string& csv_path,
              const std::string& json_path) {
    const RunRecord rec = sweep(cfg);
    print_record(rec);
    if (!csv_path.empty()) write_file(csv_path, sweep_csv(rec, cfg));
    if (!json_path.empty()) write_file(json_path, rec.to_json());
    return rec.all_pass() ? 0 : 1;
}

int cmd_distance(const std::string& in_path, const std::string& csv_path) {
    const PointSet set = load_set(in_path);
    const DistanceReport rep = distance_bound_report(set);
    std::printf("#D(E)=%llu  mattila=%.6g  q/\\q/M=%.6g  s_emp(4)=%.4f  exponent bound=%.6g\n",
                static_cast<unsigned long long>(rep.distance_count), rep.mattila,
                rep.bound_mattila, rep.s_emp4, rep.bound_exponent);
    std::printf("ratios: vs mattila %.4f, vs exponent %.4f\n", rep.ratio_mattila,
                rep.ratio_exponent);
    if (!csv_path.empty()) write_file(csv_path, distance_csv(rep));
    return 0;
}

int cmd_simplices(const std::string& in_path, std::uint32_t k, bool oracle,
                  const std::string& csv_path) {
    std::string name;
    const PointSet set = load_set(in_path, &name);
    const SimplexCensus census = simplex_census(set, k, oracle);
    std::printf("T_%u census: %llu signatures", k,
                static_cast<unsigned long long>(census.signature_count));
    if (census.orbit_count)
        std::printf(", %llu orbits", static_cast<unsigned long long>(*census.orbit_count));
    std::printf("\nconvention: %s\n", kSimplexConvention);
    if (!census.degenerate_note.empty()) std::printf("note: %s\n", census.degenerate_note.c_str());
    if (!csv_path.empty()) write_file(csv_path, census_csv(set, name, census));
    if (census.orbit_count && census.signature_count > *census.orbit_count) {
        std::printf("[FAIL] signature count exceeds orbit count\n");
        return 1;
    }
    return 0;
}

int cmd_charsum(const std::string& kind, const std::string& field_spec,
                const std::string& p_list, const std::string& f_list,
                const std::string& csv_path, const std::string& json_path) {
    const Field field = Field::parse(field_spec);
    CharSumGrid grid{Ambient(field, 2), SumKind::kGeneral, {}};
    bool ok = true;
    if (kind == "kloosterman") {
        grid = kloosterman_grid(field);
        const KloostermanCheck check = kloosterman_pointwise_check(field);
        std::printf("[%s] |K(a,b)| <= 2 sqrt(q) for ab != 0 (worst ratio %.4f)\n",
                    check.pointwise_ok ? "PASS" : "FAIL", check.worst_ratio);
        std::printf("[%s] fiber counts {", check.fibers_ok ? "PASS" : "FAIL");
        for (std::size_t i = 0; i < check.fiber_values.size(); ++i)
            std::printf("%s%llu", i ? "," : "",
                        static_cast<unsigned long long>(check.fiber_values[i]));
        std::printf("}, zero-sum fiber %llu\n",
                    static_cast<unsigned long long>(check.zero_fiber));
        ok = check.pointwise_ok && check.fibers_ok;
    } else if (kind == "weil") {
        grid = weil_grid(field);
        const WeilPointwiseReport rep =
            weil_pointwise_check(field, {Poly{0, 1}, Poly{0, 0, 1}});
        std::printf("[%s] |W(a,b)| <= (deg-1) sqrt(q) on %llu frequencies (worst %.4f)\n",
                    rep.ok ? "PASS" : "FAIL", static_cast<unsigned long long>(rep.asserted),
                    rep.worst_ratio);
        ok = rep.ok;
    } else if (kind == "general") {
        std::vector<Poly> polys;
        for (const std::string& tok : split_csv(f_list))
            polys.push_back(parse_poly_token(tok, field));
        if (polys.empty()) throw std::invalid_argument("--f is required for kind=general");
        grid = char_sum_grid(field, polys);
        const CharSpectrumLink link =
            char_spectrum_link(field, polys, static_cast<std::uint32_t>(polys.size()));
        if (link.injective) {
            std::printf("[%s] transform link residual %.3g (injective image, %llu points)\n",
                        link.max_residual < 1e-9 ? "PASS" : "FAIL", link.max_residual,
                        static_cast<unsigned long long>(link.image_size));
            ok = link.max_residual < 1e-9;
        } else {
            std::printf("map not injective (image %llu < q); transform link skipped\n",
                        static_cast<unsigned long long>(link.image_size));
        }
    } else {
        throw std::invalid_argument("kind must be kloosterman, weil, or general");
    }

    const std::vector<double> ps = parse_p_list(p_list);
    for (double p : ps)
        std::printf("||S||_%s = %.6f  (sqrt q = %.4f)\n", format_p(p).c_str(),
                    charsum_lp(grid, p), std::sqrt(static_cast<double>(field.q())));
    if (!csv_path.empty()) write_file(csv_path, grid_csv(grid));
    if (!json_path.empty()) write_file(json_path, moment_summary_json(grid, ps));
    return ok ? 0 : 1;
}

int cmd_random(ExperimentConfig cfg, const std::string& csv_path,
               const std::string& json_path) {
    const RunRecord rec = monte_carlo(cfg);
    print_record(rec);
    if (!csv_path.empty()) write_file(csv_path, sweep_csv(rec, cfg));
    if (!json_path.empty()) write_file(json_path, rec.to_json());
    return rec.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact transforms, spectral exponents, and geometric counts over F_q^d"};
    app.require_subcommand(1);

    std::string recipe, field, in_path, out_path, csv_path, json_path;
    std::string p_list = "2,4,8,inf", q_list, band = "0.125,8", cfun = "const:5", kind,
                f_list;
    std::uint32_t d = 3, k = 2;
    double alpha = 1.0, slope_max = 0.1, max_exceedance = -1.0;
    std::uint64_t trials = 200, seed = 0;
    unsigned workers = 1;
    bool oracle = false;

    auto* construct = app.add_subcommand("construct", "build a recipe set and save it");
    construct->add_option("--recipe", recipe, "recipe grammar, e.g. sphere(r=0)")->required();
    construct->add_option("--field", field, "field spec: p, p^m, p^m/c0,..,cm, or a prime power")
        ->required();
    construct->add_option("--d", d, "ambient dimension")->required();
    construct->add_option("--out", out_path, "set file to write")->required();

    auto* spectrum = app.add_subcommand("spectrum", "profile a saved set");
    spectrum->add_option("--in", in_path, "set file")->required();
    spectrum->add_option("--p", p_list, "comma list of exponents, inf allowed");
    spectrum->add_option("--csv", csv_path, "profile CSV to write");

    auto* sweep_cmd = app.add_subcommand("sweep", "recipe exponents across a q-grid");
    sweep_cmd->add_option("--recipe", recipe, "recipe grammar")->required();
    sweep_cmd->add_option("--d", d, "ambient dimension (default 3)");
    sweep_cmd->add_option("--q-list", q_list, "comma list of field specs")->required();
    sweep_cmd->add_option("--p", p_list, "comma list of exponents");
    sweep_cmd->add_option("--band", band, "ratio band lo,hi (default 0.125,8)");
    sweep_cmd->add_option("--slope-max", slope_max, "log-slope tolerance (default 0.1)");
    sweep_cmd->add_option("--workers", workers, "parallel cells (deterministic)");
    sweep_cmd->add_option("--csv", csv_path, "per-cell CSV to write");
    sweep_cmd->add_option("--json", json_path, "run record JSON to write");

    auto* distance = app.add_subcommand("distance", "distance-set bound report");
    distance->add_option("--in", in_path, "set file")->required();
    distance->add_option("--csv", csv_path, "report CSV to write");

    auto* simplices = app.add_subcommand("simplices", "congruence census of k-simplices");
    simplices->add_option("--in", in_path, "set file")->required();
    simplices->add_option("--k", k, "simplex order (default 2)");
    simplices->add_flag("--oracle", oracle, "also run the exact orbit census");
    simplices->add_option("--csv", csv_path, "census CSV to write");

    auto* charsum = app.add_subcommand("charsum", "character sum grids and moments");
    charsum->add_option("--kind", kind, "kloosterman | weil | general")->required();
    charsum->add_option("--field", field, "field spec")->required();
    charsum->add_option("--p", p_list, "moment exponents");
    charsum->add_option("--f", f_list, "coordinate polynomials for kind=general, e.g. k,k^2");
    charsum->add_option("--csv", csv_path, "grid CSV to write");
    charsum->add_option("--json", json_path, "moment summary JSON to write");

    auto* random_cmd = app.add_subcommand("random", "random-set exceedance experiment");
    random_cmd->add_option("--field", field, "field spec")->required();
    random_cmd->add_option("--d", d, "ambient dimension")->required();
    random_cmd->add_option("--alpha", alpha, "set size floor(q^alpha)");
    random_cmd->add_option("--p", p_list, "norm exponent (first entry used)");
    random_cmd->add_option("--trials", trials, "number of seeded trials");
    random_cmd->add_option("--seed", seed, "base seed");
    random_cmd->add_option("--cfun", cfun, "threshold: const:<c> | log | loglog");
    random_cmd->add_option("--max-exceedance", max_exceedance,
                           "assert the exceedance frequency stays below this");
    random_cmd->add_option("--workers", workers, "parallel trials (deterministic)");
    random_cmd->add_option("--csv", csv_path, "per-trial CSV to write");
    random_cmd->add_option("--json", json_path, "run record JSON to write");

    CLI11_PARSE(app, argc, argv);

    try {
        if (construct->parsed()) return cmd_construct(recipe, field, d, out_path);
        if (spectrum->parsed()) return cmd_spectrum(in_path, p_list, csv_path);
        if (sweep_cmd->parsed()) {
            ExperimentConfig cfg;
            cfg.recipe = recipe;
            cfg.dim = d;
            cfg.q_grid = split_csv(q_list);
            cfg.p_grid = parse_p_list(p_list);
            const auto band_parts = split_csv(band);
            if (band_parts.size() != 2)
                throw std::invalid_argument("--band expects lo,hi");
            cfg.band_lo = std::stod(band_parts[0]);
            cfg.band_hi = std::stod(band_parts[1]);
            cfg.slope_max = slope_max;
            cfg.workers = workers;
            return cmd_sweep(cfg, csv_path, json_path);
        }
        if (distance->parsed()) return cmd_distance(in_path, csv_path);
        if (simplices->parsed()) return cmd_simplices(in_path, k, oracle, csv_path);
        if (charsum->parsed())
            return cmd_charsum(kind, field, p_list, f_list, csv_path, json_path);
        if (random_cmd->parsed()) {
            ExperimentConfig cfg;
            cfg.recipe = "random";
            cfg.dim = d;
            cfg.q_grid = {field};
            cfg.p_grid = {};
            cfg.alpha = alpha;
            cfg.mc_p = parse_p_list(p_list).at(0);
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.cfun = CFun::parse(cfun);
            cfg.max_exceedance = max_exceedance;
            cfg.workers = workers;
            return cmd_random(cfg, csv_path, json_path);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
