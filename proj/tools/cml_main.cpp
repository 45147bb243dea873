#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cml/cache.hpp"
#include "cml/carpet_modulus.hpp"
#include "cml/errors.hpp"
#include "cml/experiments.hpp"
#include "cml/exports.hpp"
#include "cml/parallel.hpp"
#include "cml/render_svg.hpp"
#include "cml/tangent.hpp"
#include "cml/version.hpp"

namespace {

using namespace cml;
namespace fs = std::filesystem;

struct SpecFlags {
    std::string family = "fnp";
    int n = 5, p = 1, r = 1, m = 3;

    void attach(CLI::App* app) {
        app->add_option("--family", family, "fnp | fnpr | sm")->check(CLI::IsMember({"fnp", "fnpr", "sm"}));
        app->add_option("--n", n, "subdivision base (fnp, fnpr)");
        app->add_option("--p", p, "corner offset (fnp, fnpr)");
        app->add_option("--r", r, "hole side multiple (fnpr)");
        app->add_option("--m", m, "base (sm)");
    }

    CarpetSpec spec() const {
        if (family == "fnp") return validate_spec(CarpetSpec::fnp(n, p));
        if (family == "fnpr") return validate_spec(CarpetSpec::fnpr(n, p, r));
        return validate_spec(CarpetSpec::sm(m));
    }
};

CarpetSpec parse_slug(const std::string& slug) {
    // fnp-5-1, fnpr-7-1-2, sm-3
    std::vector<std::string> parts;
    std::string cur;
    for (char c : slug) {
        if (c == '-') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts[0] == "fnp" && parts.size() == 3)
        return validate_spec(CarpetSpec::fnp(std::stoi(parts[1]), std::stoi(parts[2])));
    if (parts[0] == "fnpr" && parts.size() == 4)
        return validate_spec(CarpetSpec::fnpr(std::stoi(parts[1]), std::stoi(parts[2]), std::stoi(parts[3])));
    if (parts[0] == "sm" && parts.size() == 2) return validate_spec(CarpetSpec::sm(std::stoi(parts[1])));
    throw ConstraintViolation("cannot parse spec slug: " + slug);
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << bytes;
}

std::pair<std::string, std::string> split_pair(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw InvalidPair("pair must be NAME,NAME (e.g. O,M1)");
    return {s.substr(0, comma), s.substr(comma + 1)};
}

// merge: flags win, then config file values, then defaults
template <class T>
void from_config(const nlohmann::json& cfg, CLI::Option* opt, const char* key, T& value) {
    if (opt && opt->count() > 0) return;
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

int run(int argc, char** argv) {
    CLI::App app{"cml: square-carpet generation and discrete carpet modulus"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags are accepted after subcommand names too

    int jobs = 0;
    std::string cache_dir = ResultCache::default_dir();
    bool no_cache = false;
    app.add_option("--jobs", jobs, "worker threads (0 = library default)");
    app.add_option("--cache", cache_dir, "cache directory (env CML_CACHE)");
    app.add_flag("--no-cache", no_cache, "solve without consulting the cache");

    // ---- gen ----
    auto* gen_cmd = app.add_subcommand("gen", "generate a carpet approximation");
    gen_cmd->fallthrough();
    SpecFlags gen_spec;
    gen_spec.attach(gen_cmd);
    int gen_level = 1;
    std::string gen_out = ".";
    bool gen_no_svg = false;
    long long gen_budget = kDefaultCellBudget;
    gen_cmd->add_option("--level", gen_level, "subdivision depth k");
    gen_cmd->add_option("--out", gen_out, "output directory");
    gen_cmd->add_flag("--no-svg", gen_no_svg, "skip figure.svg");
    gen_cmd->add_option("--budget", gen_budget, "cell budget");

    // ---- modulus ----
    auto* mod_cmd = app.add_subcommand("modulus", "discrete carpet modulus of a circle pair");
    mod_cmd->fallthrough();
    SpecFlags mod_spec;
    mod_spec.attach(mod_cmd);
    std::string mod_pair = "O,M1";
    int mod_level = 1;
    std::string mod_corner = "on";
    std::string mod_group = "none";
    bool mod_brute = false;
    uint64_t mod_seed = 0;
    std::string mod_out;
    mod_cmd->add_option("--pair", mod_pair, "circle pair, e.g. O,M1 or #0,#7");
    mod_cmd->add_option("--level", mod_level, "subdivision depth k");
    mod_cmd->add_option("--corner-touch", mod_corner, "on | off")->check(CLI::IsMember({"on", "off"}));
    mod_cmd->add_option("--group", mod_group, "none | d4 | c4 | rd | rv")
        ->check(CLI::IsMember({"none", "d4", "c4", "rd", "rv"}));
    mod_cmd->add_flag("--brute-force", mod_brute, "exhaustive enumeration instead of constraint generation");
    mod_cmd->add_option("--warm-seed", mod_seed, "randomized warm start seed (0 = deterministic)");
    mod_cmd->add_option("--out", mod_out, "also write the report to this file");

    // ---- experiment ----
    auto* exp_cmd = app.add_subcommand("experiment", "rigidity experiments");
    exp_cmd->fallthrough();
    exp_cmd->require_subcommand(1);
    std::string exp_config;
    exp_cmd->add_option("--config", exp_config, "JSON config; flags take precedence");

    auto* exp_inter = exp_cmd->add_subcommand("interchange", "modulus table over non-adjacent pairs");
    exp_inter->fallthrough();
    auto* exp_sig = exp_cmd->add_subcommand("signature", "maximizer multiplicity signature");
    exp_sig->fallthrough();
    SpecFlags inter_spec, sig_spec;
    inter_spec.attach(exp_inter);
    sig_spec.attach(exp_sig);
    int inter_level = 2, sig_level = 2;
    int inter_maxgen = 2, sig_maxgen = 2;
    std::string inter_corner = "on", sig_corner = "on";
    std::string inter_out = ".", sig_out = ".";
    auto* o_inter_level = exp_inter->add_option("--level", inter_level);
    exp_inter->add_option("--max-gen", inter_maxgen, "pair pool: both circles of generation <= this");
    exp_inter->add_option("--corner-touch", inter_corner)->check(CLI::IsMember({"on", "off"}));
    exp_inter->add_option("--out", inter_out, "output directory");
    auto* o_sig_level = exp_sig->add_option("--level", sig_level);
    exp_sig->add_option("--max-gen", sig_maxgen);
    exp_sig->add_option("--corner-touch", sig_corner)->check(CLI::IsMember({"on", "off"}));
    exp_sig->add_option("--out", sig_out, "output directory");

    auto* exp_fp = exp_cmd->add_subcommand("fingerprint", "scale-free observable comparison");
    exp_fp->fallthrough();
    std::string fp_a = "fnp-5-1", fp_b = "fnp-7-1";
    int fp_level = 2;
    std::string fp_out = ".";
    exp_fp->add_option("--spec-a", fp_a, "spec slug, e.g. fnp-5-1");
    exp_fp->add_option("--spec-b", fp_b, "spec slug, e.g. fnp-7-1");
    exp_fp->add_option("--level", fp_level);
    exp_fp->add_option("--out", fp_out, "output directory");

    auto* exp_conv = exp_cmd->add_subcommand("convergence", "level sweep for one pair");
    exp_conv->fallthrough();
    SpecFlags conv_spec;
    conv_spec.attach(exp_conv);
    std::string conv_pair = "O,M1";
    int conv_kmin = 1, conv_kmax = 2;
    std::string conv_out = ".";
    exp_conv->add_option("--pair", conv_pair);
    exp_conv->add_option("--k-min", conv_kmin);
    exp_conv->add_option("--k-max", conv_kmax);
    exp_conv->add_option("--out", conv_out, "output directory");

    auto* exp_tan = exp_cmd->add_subcommand("tangent", "weak-tangent projection mass and transfer");
    exp_tan->fallthrough();
    SpecFlags tan_spec;
    tan_spec.attach(exp_tan);
    int tan_depth = 2, tan_w = 1;
    uint64_t tan_seed = 0;
    std::string tan_out = ".";
    exp_tan->add_option("--depth", tan_depth, "window depth d");
    exp_tan->add_option("--w", tan_w, "window exponent");
    exp_tan->add_option("--seed", tan_seed, "sample-path radius phase (default 0)");
    exp_tan->add_option("--out", tan_out, "output directory");

    app.parse(argc, argv);
    set_jobs(jobs);
    const bool parallel = true; // deterministic for any thread count

    if (*gen_cmd) {
        CarpetSpec spec = gen_spec.spec();
        CellGrid grid = generate(spec, gen_level, gen_budget);
        CircleCatalog cat = CircleCatalog::build(spec, gen_level);
        fs::create_directories(gen_out);
        write_file(fs::path(gen_out) / "grid.json", grid_to_json(grid).dump(2) + "\n");
        write_file(fs::path(gen_out) / "catalog.json", catalog_to_json(cat).dump(2) + "\n");
        if (!gen_no_svg) write_file(fs::path(gen_out) / "figure.svg", render_svg(grid, cat));
        std::cout << spec.name() << " level " << gen_level << ": " << grid.count() << " cells, "
                  << cat.size() << " circles -> " << gen_out << "\n";
        return 0;
    }

    if (*mod_cmd) {
        CarpetSpec spec = mod_spec.spec();
        CircleCatalog cat = CircleCatalog::build(spec, mod_level);
        auto [n1, n2] = split_pair(mod_pair);
        PathFamilySpec fam{spec, mod_level, cat.resolve_name(n1), cat.resolve_name(n2), mod_corner == "on"};
        if (classify_pair(cat, fam.c1, fam.c2) == PairClass::Adjacent)
            std::cerr << "warning: " << n1 << "," << n2 << " is an adjacent pair; exploratory only\n";

        CarpetSolveOptions opt;
        opt.engine.parallel = parallel;
        opt.engine.warm_seed = mod_seed;

        nlohmann::json key;
        key["schema"] = "cm-cache-key/1";
        key["code_version"] = std::string(kCodeVersion);
        key["spec"] = spec.slug();
        key["level"] = mod_level;
        key["pair"] = {fam.c1, fam.c2};
        key["corner_touch"] = fam.corner_touch;
        key["group"] = mod_group;
        key["brute_force"] = mod_brute;
        key["tol_feas"] = opt.engine.tol_feas;
        key["tol_obj"] = opt.engine.tol_obj;
        key["chunks"] = opt.engine.chunks;
        key["cuts_per_chunk"] = opt.engine.cuts_per_chunk;
        key["warm_seed"] = mod_seed;

        ResultCache cache(cache_dir);
        std::string text;
        bool hit = false;
        if (!no_cache) {
            if (auto cached = cache.lookup(key)) {
                text = *cached;
                hit = true;
            }
        }
        SolveStatus status = SolveStatus::Ok;
        if (!hit) {
            CarpetReport rep;
            if (mod_brute) {
                rep = brute_force_carpet_modulus(fam, 2000000, opt);
            } else if (mod_group != "none") {
                GroupQuotientSpec q;
                if (mod_group == "d4") q.generators = {dih_rd(), dih_rv()};
                if (mod_group == "c4") q.generators = {compose(dih_rd(), dih_rv())};
                if (mod_group == "rd") q.generators = {dih_rd()};
                if (mod_group == "rv") q.generators = {dih_rv()};
                q.allow_mixed_pair_orbits = true;
                rep = group_carpet_modulus(fam, q, opt);
            } else {
                rep = carpet_modulus(fam, opt);
            }
            status = rep.status;
            text = carpet_report_to_json(cat, rep, cache.key_hash(key)).dump(2) + "\n";
            if (!no_cache) cache.store(key, text);
        } else {
            nlohmann::json parsed = nlohmann::json::parse(text);
            const std::string st = parsed.value("status", "ok");
            if (st == "iteration_limit") status = SolveStatus::IterationLimit;
        }
        std::cout << text;
        if (!mod_out.empty()) write_file(mod_out, text);
        return status == SolveStatus::IterationLimit ? 3 : 0;
    }

    nlohmann::json cfgj = nlohmann::json::object();
    if (!exp_config.empty()) {
        std::ifstream in(exp_config);
        if (!in) throw std::runtime_error("cannot read config " + exp_config);
        in >> cfgj;
    }

    if (*exp_inter || *exp_sig) {
        const bool inter = exp_inter->parsed();
        ExperimentConfig cfg;
        SpecFlags& sf = inter ? inter_spec : sig_spec;
        from_config(cfgj, nullptr, "family", sf.family);
        from_config(cfgj, nullptr, "n", sf.n);
        from_config(cfgj, nullptr, "p", sf.p);
        from_config(cfgj, nullptr, "r", sf.r);
        from_config(cfgj, nullptr, "m", sf.m);
        cfg.spec = sf.spec();
        cfg.level = inter ? inter_level : sig_level;
        from_config(cfgj, inter ? o_inter_level : o_sig_level, "level", cfg.level);
        cfg.max_generation = inter ? inter_maxgen : sig_maxgen;
        cfg.corner_touch = (inter ? inter_corner : sig_corner) == "on";
        cfg.parallel_rows = parallel;
        const std::string out_dir = inter ? inter_out : sig_out;
        fs::create_directories(out_dir);
        InterchangeReport rep = interchange_table(cfg);
        write_file(fs::path(out_dir) / "table.csv", interchange_csv(rep));
        nlohmann::json j = interchange_to_json(rep);
        write_file(fs::path(out_dir) / "report.json", j.dump(2) + "\n");
        CellGrid grid = generate(cfg.spec, cfg.level);
        CircleCatalog cat = CircleCatalog::build(cfg.spec, cfg.level);
        write_file(fs::path(out_dir) / "figure.svg", render_svg(grid, cat));
        if (!inter) {
            // signature mode surfaces ties as a hard error
            if (rep.signature.maximizers.size() != 1)
                throw TieAmbiguity("maximum attained by " + std::to_string(rep.signature.maximizers.size()) +
                                   " orbits within tie tolerance");
            std::cout << "max " << rep.signature.max_value << " multiplicity "
                      << rep.signature.multiplicity << " margin " << rep.signature.margin << "\n";
        } else {
            std::cout << "rows " << rep.rows.size() << " max " << rep.signature.max_value
                      << " multiplicity " << rep.signature.multiplicity << " -> " << out_dir << "\n";
        }
        return 0;
    }

    if (*exp_fp) {
        FingerprintComparison cmp = fingerprint_compare(parse_slug(fp_a), parse_slug(fp_b), fp_level);
        fs::create_directories(fp_out);
        write_file(fs::path(fp_out) / "report.json", fingerprint_to_json(cmp).dump(2) + "\n");
        std::cout << (cmp.indistinguishable ? "indistinguishable" : "distinct") << " max-rel-gap "
                  << cmp.max_rel_gap << "\n";
        return 0;
    }

    if (*exp_conv) {
        CarpetSpec spec = conv_spec.spec();
        auto [n1, n2] = split_pair(conv_pair);
        CarpetSolveOptions opt;
        opt.engine.parallel = parallel;
        ConvergenceReport rep = convergence_study(spec, n1, n2, conv_kmin, conv_kmax, opt);
        fs::create_directories(conv_out);
        write_file(fs::path(conv_out) / "report.json", convergence_to_json(rep).dump(2) + "\n");
        for (size_t i = 0; i < rep.levels.size(); ++i)
            std::cout << "k=" << rep.levels[i] << " " << to_string(rep.statuses[i]) << " "
                      << rep.values[i] << "\n";
        return 0;
    }

    if (*exp_tan) {
        CarpetSpec spec = tan_spec.spec();
        ProjectionMassReport proj = projection_mass(spec, tan_depth, parallel);
        TangentWindow window = build_window(spec, tan_w, tan_depth, WindowKind::Origin);
        AdmissibilityReport adm =
            admissibility_sample(window, default_sample_paths(spec, tan_w, tan_depth, tan_seed));
        ThirdTransferReport transfer = third_transfer(spec, tan_depth, tan_w, parallel);
        nlohmann::json j = projection_report_to_json(proj);
        j["admissibility"] = {{"min_sum", adm.min_sum}, {"violation", adm.violation}};
        j["third_transfer"] = {{"mass_origin", transfer.mass_origin},
                               {"mass_corner", transfer.mass_corner},
                               {"mass_ratio", {transfer.mass_ratio.num, transfer.mass_ratio.den}},
                               {"corner_min_sum", transfer.corner_samples.min_sum}};
        fs::create_directories(tan_out);
        write_file(fs::path(tan_out) / "report.json", j.dump(2) + "\n");
        std::cout << "K " << proj.K << " mass " << proj.mass << " bound " << proj.bound << " slack "
                  << proj.slack << "\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ParseError& e) {
        CLI::App dummy;
        const int code = dummy.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const cml::BudgetExceeded& e) {
        nlohmann::json err = {{"error", "budget_exceeded"}, {"what", e.what()}, {"reached", e.reached}};
        std::cerr << err.dump() << "\n";
        return 4;
    } catch (const cml::TieAmbiguity& e) {
        nlohmann::json err = {{"error", "tie_ambiguity"}, {"what", e.what()}};
        std::cerr << err.dump() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        nlohmann::json err = {{"error", "invalid_argument"}, {"what", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        nlohmann::json err = {{"error", "failure"}, {"what", e.what()}};
        std::cerr << err.dump() << "\n";
        return 3;
    }
}
