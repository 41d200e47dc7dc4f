// Command-line driver: generate sphere point sets, assemble ReLU^k mass and
// stiffness Gram matrices, and run the spectral-law experiment sweeps.
// Every command is seed-deterministic: identical flags give identical bytes.
//
// Exit codes: 0 ok, 1 usage or I/O error, 2 threshold failure (CI gating),
// 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sphgram/common.hpp"
#include "sphgram/io.hpp"
#include "sphgram/spectra.hpp"

using namespace sphgram;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
    int d = 2, k = 1, s = 0, n = 100;
    std::uint64_t seed = 0;
    std::string method = "riesz";  // gen-points / sweep generator
    int iters = 1500;
    double tol = 1e-7;
    int grid = -1;
    int m_max = -1;
    long long qmc_samples = 1000000;
    int threads = 1;
    std::string kind = "mass";
    std::string points_path;
    std::string out;
    std::string format = "csv";
    std::vector<int> sizes{50, 100, 200, 400};
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5};
    double j_lo = -1, j_hi = -1;  // spectrum fit range override
    bool print_config = false;
};

std::string out_dir() {
    const char* env = std::getenv("SPHGRAM_OUT_DIR");
    return env && *env ? env : ".";
}

std::string resolve_out(const Options& o, const std::string& fallback) {
    if (!o.out.empty()) return o.out;
    return (fs::path(out_dir()) / fallback).string();
}

json options_json(const Options& o) {
    return json{{"d", o.d},
                {"k", o.k},
                {"s", o.s},
                {"n", o.n},
                {"seed", o.seed},
                {"method", o.method},
                {"iters", o.iters},
                {"tol", o.tol},
                {"grid", o.grid},
                {"mmax", o.m_max},
                {"qmc_samples", o.qmc_samples},
                {"threads", o.threads},
                {"kind", o.kind},
                {"points", o.points_path},
                {"out", o.out},
                {"format", o.format},
                {"sizes", o.sizes},
                {"seeds", o.seeds}};
}

// config file (JSON) -> defaults; command-line flags still take precedence
void apply_config_file(Options& o, const std::string& path) {
    json j = json::parse(std::ifstream(path));
    if (j.contains("d")) o.d = j["d"];
    if (j.contains("k")) o.k = j["k"];
    if (j.contains("s")) o.s = j["s"];
    if (j.contains("n")) o.n = j["n"];
    if (j.contains("seed")) o.seed = j["seed"];
    if (j.contains("method")) o.method = j["method"];
    if (j.contains("iters")) o.iters = j["iters"];
    if (j.contains("tol")) o.tol = j["tol"];
    if (j.contains("grid")) o.grid = j["grid"];
    if (j.contains("mmax")) o.m_max = j["mmax"];
    if (j.contains("qmc_samples")) o.qmc_samples = j["qmc_samples"];
    if (j.contains("threads")) o.threads = j["threads"];
    if (j.contains("kind")) o.kind = j["kind"];
    if (j.contains("points")) o.points_path = j["points"];
    if (j.contains("out")) o.out = j["out"];
    if (j.contains("format")) o.format = j["format"];
    if (j.contains("sizes")) o.sizes = j["sizes"].get<std::vector<int>>();
    if (j.contains("seeds")) o.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--d", o.d, "sphere dimension (S^d in R^{d+1})");
    cmd->add_option("--k", o.k, "activation order of relu^k");
    cmd->add_option("--s", o.s, "gradient order (stiffness)");
    cmd->add_option("--n", o.n, "number of points");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--points", o.points_path, "point-set file (text or .json)");
    cmd->add_option("--mmax", o.m_max, "series truncation degree (-1: default)");
    cmd->add_option("--qmc-samples", o.qmc_samples, "monte carlo sample count");
    cmd->add_option("--out", o.out, "output path (file or directory member)");
    cmd->add_option("--format", o.format, "csv|json for reports");
    cmd->add_option("--threads", o.threads, "worker threads (deterministic)");
    cmd->add_option("--grid", o.grid, "fill-distance grid resolution per angle");
    cmd->add_flag("--print-config", o.print_config, "dump the resolved config");
}

PointSet resolve_points(const Options& o) {
    if (!o.points_path.empty()) return load_points(o.points_path);
    if (o.method == "random") return sample_uniform(o.d, o.n, o.seed);
    if (o.method == "riesz")
        return riesz_minimize(o.d, o.n, o.seed, o.iters, o.tol).points;
    throw CLI::ValidationError("--method must be random or riesz");
}

GramMatrix resolve_gram(const Options& o, const PointSet& ps) {
    int mm = o.m_max > 0 ? o.m_max : default_m_max(ps.d, ps.n());
    if (o.kind == "mass") return assemble_mass(ps, o.k, mm, o.threads);
    if (o.kind == "stiffness")
        return assemble_stiffness(ps, o.k, o.s, mm, o.threads);
    throw CLI::ValidationError("--kind must be mass or stiffness");
}

int grid_of(const Options& o, int d) {
    return o.grid > 0 ? o.grid : default_grid_resolution(d);
}

int cmd_gen_points(const Options& o) {
    PointSet ps = resolve_points(o);
    std::string path = resolve_out(
        o, "points_d" + std::to_string(ps.d) + "_n" + std::to_string(ps.n()) + "_" +
               o.method + std::to_string(o.seed) +
               (o.format == "json" ? ".json" : ".txt"));
    save_points(ps, path);
    MeshStatistics ms = mesh_statistics(ps, grid_of(o, ps.d));
    json side{{"d", ps.d},
              {"n", ps.n()},
              {"method", o.method},
              {"seed", o.seed},
              {"iterations", ps.provenance.iterations},
              {"h", ms.fill_distance},
              {"h_lower", ms.antipodal_separation},
              {"mesh_ratio", ms.mesh_ratio},
              {"grid_resolution", grid_of(o, ps.d)},
              {"grid_spacing", ms.fill_grid_spacing}};
    std::ofstream(path + ".meta.json") << side.dump(1) << "\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_mesh_stats(const Options& o) {
    PointSet ps = resolve_points(o);
    MeshStatistics ms = mesh_statistics(ps, grid_of(o, ps.d));
    json j{{"h", ms.fill_distance},
           {"h_lower", ms.antipodal_separation},
           {"mesh_ratio", ms.mesh_ratio},
           {"grid_spacing", ms.fill_grid_spacing}};
    std::cout << j.dump(1) << "\n";
    return 0;
}

int cmd_coeff_table(const Options& o) {
    int mm = o.m_max > 0 ? o.m_max : 200;
    CoefficientTable xi = xi_table(o.d, o.k, mm);
    CoefficientTable xis = o.s > 0 ? xi_s_table(o.d, o.k, o.s, mm) : xi;
    Table t;
    t.columns = {"m", "in_E", "xi"};
    if (o.s > 0) t.columns.push_back("xi_s");
    t.columns.push_back("oracle");
    t.columns.push_back("rel_err");
    int oracle_cap = std::min(mm, 200);
    for (int m = 0; m <= mm; ++m) {
        std::vector<double> row{double(m), double(xi.active[m]), xi.values[m]};
        if (o.s > 0) row.push_back(xis.values[m]);
        if (m <= oracle_cap) {
            OracleResult orc = coefficient_oracle(o.d, o.k, m);
            double sh = sigma_hat(o.d, o.k, m);
            double rel = std::abs(sh) > 0
                             ? std::abs(orc.value - sh) / std::abs(sh)
                             : std::abs(orc.value);
            row.push_back(orc.value);
            row.push_back(rel);
        } else {
            row.push_back(std::nan(""));
            row.push_back(std::nan(""));
        }
        t.rows.push_back(row);
    }
    std::string path = resolve_out(o, std::string("coeff_table.") + o.format);
    save_table(t, path, o.format);
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_assemble(const Options& o) {
    PointSet ps = resolve_points(o);
    GramMatrix g = resolve_gram(o, ps);
    std::string path = resolve_out(o, "gram." + std::string(o.format == "bin" ? "bin" : "csv"));
    if (o.format == "bin" || path.ends_with(".bin"))
        save_gram_binary(g, path);
    else
        save_gram_csv(g, path);
    std::cout << "wrote " << path << " (tail_bound " << format_double(g.tail_bound)
              << ")\n";
    return 0;
}

int cmd_spectrum(const Options& o) {
    PointSet ps = resolve_points(o);
    SpectrumReport r = eig_sym(resolve_gram(o, ps));
    Table t;
    t.columns = {"j", "lambda_j"};
    for (int j = 1; j <= r.n; ++j)
        t.rows.push_back({double(j), r.eigenvalues[j - 1]});
    std::string path = resolve_out(o, std::string("spectrum.") + o.format);
    save_table(t, path, o.format);
    PowerLawFit f = spectrum_law_fit(r, (int)o.j_lo, (int)o.j_hi);
    double alpha = double(r.d + 2 * (o.kind == "stiffness" ? o.k - o.s : o.k) + 1) / r.d;
    std::cout << "wrote " << path << "\n"
              << "kappa " << format_double(r.condition_number) << ", fit slope "
              << format_double(f.slope) << " over j [" << f.x_lo << "," << f.x_hi
              << "], theoretical -" << format_double(alpha) << "\n";
    return 0;
}

int cmd_scaling(const Options& o) {
    if (o.sizes.size() < 4) throw CLI::ValidationError("scaling needs >= 4 sizes");
    SweepConfig cfg;
    cfg.d = o.d;
    cfg.k = o.k;
    cfg.s = o.s;
    cfg.kind = o.kind == "stiffness" ? GramKind::stiffness : GramKind::mass;
    cfg.sizes = o.sizes;
    cfg.generator = o.method == "random" ? Generator::random : Generator::riesz;
    cfg.seeds = o.seeds;
    cfg.riesz_max_iters = o.iters;
    cfg.riesz_step_tol = o.tol;
    cfg.select_by_mesh_ratio = cfg.generator == Generator::riesz;
    cfg.m_max = o.m_max;
    cfg.grid_resolution = grid_of(o, o.d);
    cfg.threads = o.threads;
    SweepResult res = condition_sweep(cfg);

    Table t;
    t.columns = {"n", "h", "h_lower", "kappa", "slope_so_far"};
    std::vector<double> xs, ys;
    for (const auto& rec : res.per_n) {
        xs.push_back(rec.n);
        ys.push_back(rec.kappa);
        double so_far = std::nan("");
        if (xs.size() >= 2) so_far = fit_power_law(xs, ys).slope;
        t.rows.push_back({double(rec.n), rec.h, rec.h_lower, rec.kappa, so_far});
    }
    std::string path = resolve_out(o, std::string("scaling.") + o.format);
    save_table(t, path, o.format);

    double alpha = res.theoretical_exponent;
    double dev = std::abs(res.fit.slope - alpha) / alpha;
    std::cout << "wrote " << path << "\n"
              << "theoretical exponent " << format_double(alpha) << ", fitted slope "
              << format_double(res.fit.slope) << ", relative deviation "
              << format_double(dev) << "\n";
    for (const auto& rec : res.records)
        if (!rec.ok)
            std::cerr << "warning: n=" << rec.n << " seed=" << rec.seed
                      << " excluded (singular)\n";
    return dev <= 0.15 ? 0 : 2;
}

int cmd_deff(const Options& o) {
    PointSet ps = resolve_points(o);
    SpectrumReport r = eig_sym(resolve_gram(o, ps));
    EffectiveDimensionCurve c = effective_dimension(r, default_lambda_grid(r));
    Table t;
    t.columns = {"lambda", "d_eff"};
    for (std::size_t i = 0; i < c.lambda.size(); ++i)
        t.rows.push_back({c.lambda[i], c.d_eff[i]});
    std::string path = resolve_out(o, std::string("deff.") + o.format);
    save_table(t, path, o.format);
    double target = double(r.d) / (r.d + 2 * r.k + 1);
    std::cout << "wrote " << path << "\n"
              << "fit slope " << format_double(c.fit.slope) << " vs 1/alpha "
              << format_double(target) << " (window [" << format_double(c.lambda.front())
              << "," << format_double(c.lambda.back()) << "])\n";
    return 0;
}

int cmd_bands(const Options& o) {
    PointSet ps = resolve_points(o);
    GramMatrix g = resolve_gram(o, ps);
    SpectrumReport r = eig_sym(g);
    int mm = g.m_max;
    CoefficientTable xi =
        o.kind == "stiffness" ? xi_s_table(o.d, o.k, o.s, mm) : xi_table(o.d, o.k, mm);
    BandIndex bands = band_index(o.d, o.k, mm);
    auto recs = plateau_check(r, bands, xi);
    Table t;
    t.columns = {"m", "d_m", "ratio_lower", "ratio_upper"};
    for (const auto& rec : recs)
        t.rows.push_back({double(rec.band), double(rec.d_m2), rec.ratio_lower,
                          rec.ratio_upper});
    std::string path = resolve_out(o, std::string("bands.") + o.format);
    save_table(t, path, o.format);
    std::cout << "wrote " << path << " (" << recs.size() << " bands)\n";
    return 0;
}

int cmd_compare_sampling(const Options& o) {
    if (o.seeds.size() < 10)
        throw CLI::ValidationError("compare-sampling needs >= 10 seeds");
    int grid = grid_of(o, o.d);
    Table t;
    t.columns = {"n",        "h_random", "h_lower_random", "kappa_random",
                 "h_riesz",  "h_lower_riesz", "kappa_riesz"};
    std::vector<double> ns, hl_rand, hl_riesz;
    bool kappa_ordered = true;
    for (int n : o.sizes) {
        int mm = o.m_max > 0 ? o.m_max : default_m_max(o.d, n);
        std::vector<double> hr, hlr, kr, hq, hlq, kq;
        for (std::uint64_t seed : o.seeds) {
            PointSet pr = sample_uniform(o.d, n, seed);
            MeshStatistics mr = mesh_statistics(pr, grid);
            hr.push_back(mr.fill_distance);
            hlr.push_back(mr.antipodal_separation);
            kr.push_back(eig_sym(assemble_mass(pr, o.k, mm, o.threads)).condition_number);
            PointSet pq = riesz_minimize(o.d, n, seed, o.iters, o.tol).points;
            MeshStatistics mq = mesh_statistics(pq, grid);
            hq.push_back(mq.fill_distance);
            hlq.push_back(mq.antipodal_separation);
            kq.push_back(eig_sym(assemble_mass(pq, o.k, mm, o.threads)).condition_number);
        }
        auto med = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            return v[v.size() / 2];
        };
        double mhr = med(hr), mhlr = med(hlr), mkr = med(kr);
        double mhq = med(hq), mhlq = med(hlq), mkq = med(kq);
        t.rows.push_back({double(n), mhr, mhlr, mkr, mhq, mhlq, mkq});
        ns.push_back(n);
        hl_rand.push_back(mhlr);
        hl_riesz.push_back(mhlq);
        if (mkr < mkq) kappa_ordered = false;
    }
    std::string path = resolve_out(o, std::string("compare.") + o.format);
    save_table(t, path, o.format);
    PowerLawFit fr = fit_power_law(ns, hl_rand);
    PowerLawFit fq = fit_power_law(ns, hl_riesz);
    std::cout << "wrote " << path << "\n"
              << "h_lower slope random " << format_double(fr.slope) << " (expect -"
              << format_double(2.0 / o.d) << "), riesz " << format_double(fq.slope)
              << " (expect -" << format_double(1.0 / o.d) << ")\n"
              << "median kappa(random) >= kappa(riesz) at every n: "
              << (kappa_ordered ? "yes" : "no") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relu^k sphere Gram matrix toolkit"};
    app.require_subcommand(1);
    Options o;

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    // pre-scan so config values become defaults before flag parsing
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    if (!config_path.empty()) {
        try {
            apply_config_file(o, config_path);
        } catch (const std::exception& e) {
            std::cerr << "error: bad config file: " << e.what() << "\n";
            return 1;
        }
    }

    auto* gen = app.add_subcommand("gen-points", "generate a point set file");
    gen->add_option("--method", o.method, "random|riesz");
    gen->add_option("--iters", o.iters, "riesz max iterations");
    gen->add_option("--tol", o.tol, "riesz relative-decrease stop");
    add_common(gen, o);
    auto* mesh = app.add_subcommand("mesh-stats", "mesh statistics of a point set");
    add_common(mesh, o);
    auto* coeff = app.add_subcommand("coeff-table", "xi tables with the oracle column");
    add_common(coeff, o);
    auto* asmb = app.add_subcommand("assemble", "assemble a Gram matrix");
    asmb->add_option("--kind", o.kind, "mass|stiffness");
    asmb->add_option("--method", o.method, "generator when --points absent");
    asmb->add_option("--iters", o.iters, "riesz max iterations");
    asmb->add_option("--tol", o.tol, "riesz relative-decrease stop");
    add_common(asmb, o);
    auto* spec = app.add_subcommand("spectrum", "full spectrum and power-law fit");
    spec->add_option("--kind", o.kind, "mass|stiffness");
    spec->add_option("--method", o.method, "generator when --points absent");
    spec->add_option("--iters", o.iters, "riesz max iterations");
    spec->add_option("--tol", o.tol, "riesz relative-decrease stop");
    spec->add_option("--j-lo", o.j_lo, "fit range lower index");
    spec->add_option("--j-hi", o.j_hi, "fit range upper index");
    add_common(spec, o);
    auto* scal = app.add_subcommand("scaling", "condition-number sweep vs n");
    scal->add_option("--kind", o.kind, "mass|stiffness");
    scal->add_option("--method", o.method, "random|riesz generator");
    scal->add_option("--sizes", o.sizes, "sweep sizes (increasing)");
    scal->add_option("--seeds", o.seeds, "restart seeds per size");
    scal->add_option("--iters", o.iters, "riesz max iterations");
    scal->add_option("--tol", o.tol, "riesz relative-decrease stop");
    add_common(scal, o);
    auto* deff = app.add_subcommand("deff", "effective dimension curve");
    deff->add_option("--kind", o.kind, "mass|stiffness");
    deff->add_option("--method", o.method, "generator when --points absent");
    deff->add_option("--iters", o.iters, "riesz max iterations");
    deff->add_option("--tol", o.tol, "riesz relative-decrease stop");
    add_common(deff, o);
    auto* band = app.add_subcommand("bands", "plateau band diagnostics");
    band->add_option("--kind", o.kind, "mass|stiffness");
    band->add_option("--method", o.method, "generator when --points absent");
    band->add_option("--iters", o.iters, "riesz max iterations");
    band->add_option("--tol", o.tol, "riesz relative-decrease stop");
    add_common(band, o);
    auto* comp = app.add_subcommand("compare-sampling", "random vs riesz stability");
    comp->add_option("--sizes", o.sizes, "sweep sizes");
    comp->add_option("--seeds", o.seeds, "seeds (>= 10)");
    comp->add_option("--iters", o.iters, "riesz max iterations");
    comp->add_option("--tol", o.tol, "riesz relative-decrease stop");
    add_common(comp, o);

    CLI11_PARSE(app, argc, argv);

    if (o.print_config) {
        std::cout << options_json(o).dump(1) << "\n";
        return 0;
    }

    try {
        if (gen->parsed()) return cmd_gen_points(o);
        if (mesh->parsed()) return cmd_mesh_stats(o);
        if (coeff->parsed()) return cmd_coeff_table(o);
        if (asmb->parsed()) return cmd_assemble(o);
        if (spec->parsed()) return cmd_spectrum(o);
        if (scal->parsed()) return cmd_scaling(o);
        if (deff->parsed()) return cmd_deff(o);
        if (band->parsed()) return cmd_bands(o);
        if (comp->parsed()) return cmd_compare_sampling(o);
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
