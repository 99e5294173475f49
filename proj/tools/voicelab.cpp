#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "voicelab/coorbit.hpp"
#include "voicelab/io.hpp"
#include "voicelab/selftest.hpp"

namespace vl = voicelab;
using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& message) {
    throw CLI::ValidationError("config", message);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            config_error("unknown key '" + it.key() + "' in " + where);
}

vl::GridParams parse_grid(const json& j) {
    vl::GridParams p;
    if (!j.is_object()) config_error("'grid' must be an object");
    reject_unknown(j, {"b_halfwidth", "n_b", "a_min", "a_max", "n_a", "n_phi"}, "grid");
    if (j.contains("b_halfwidth")) p.b_halfwidth = j["b_halfwidth"].get<double>();
    if (j.contains("n_b")) p.n_b = j["n_b"].get<std::size_t>();
    if (j.contains("a_min")) p.a_min = j["a_min"].get<double>();
    if (j.contains("a_max")) p.a_max = j["a_max"].get<double>();
    if (j.contains("n_a")) p.n_a = j["n_a"].get<std::size_t>();
    if (j.contains("n_phi")) p.n_phi = j["n_phi"].get<std::size_t>();
    return p;
}

vl::Representation parse_rep(const json& j) {
    if (!j.is_object()) config_error("'rep' must be an object");
    reject_unknown(j, {"kind", "atom", "omega", "xi0", "s", "decay", "n_max", "normalize"}, "rep");
    const std::string kind = j.value("kind", "wavelet");
    const std::string atom = j.value("atom", kind == "translation" ? "sinc" : "lognormal");
    const bool normalize = j.value("normalize", true);

    auto make_atom = [&](bool two_sided) -> vl::SpectralProfile {
        if (atom == "shannon") return vl::shannon_atom(two_sided);
        if (atom == "lognormal") {
            const double xi0 = j.value("xi0", std::pow(2.0, -1.5));
            const double s = j.value("s", 0.15);
            return vl::lognormal_band(xi0, s, two_sided);
        }
        config_error("unknown atom '" + atom + "'");
    };

    if (kind == "translation") {
        const double omega = j.value("omega", 0.5);
        if (atom == "sinc") return vl::translation_rep(omega);
        config_error("translation rep supports atom 'sinc'");
    }
    if (kind == "wavelet") {
        vl::Representation rep = vl::wavelet_rep(make_atom(true));
        return normalize ? vl::normalize_admissible(rep).first : rep;
    }
    if (kind == "schrodingerlet") {
        const double decay = j.value("decay", 0.5);
        const int n_max = j.value("n_max", 16);
        vl::Representation rep = vl::schrodingerlet_rep(make_atom(false), decay, n_max);
        return normalize ? vl::normalize_admissible(rep).first : rep;
    }
    config_error("unknown rep kind '" + kind + "'");
}

vl::GroupSpec grid_spec_for(const vl::Representation& rep) {
    switch (rep.kind) {
        case vl::RepKind::Translation: return vl::GroupSpec{vl::GroupKind::Line};
        case vl::RepKind::Wavelet: return vl::GroupSpec{vl::GroupKind::Affine};
        default: return vl::GroupSpec{vl::GroupKind::AffineCircle};
    }
}

vl::Weight parse_weight(const std::string& id) {
    if (id == "one") return vl::weight_one();
    if (id.rfind("poly:", 0) == 0) return vl::weight_poly(std::stod(id.substr(5)));
    config_error("unknown weight '" + id + "' (use 'one' or 'poly:s')");
}

vl::SpectralProfile default_envelope(const vl::Representation& rep) {
    if (rep.kind == vl::RepKind::Translation) {
        const double omega = rep.omega.hi;
        return vl::mollifier(0.1 * omega, 0.8 * omega);
    }
    return vl::lognormal_band(std::pow(2.0, -1.5), 0.12, /*two_sided=*/true);
}

double field_symmetry_residual(const vl::VoiceField& K) {
    // eq. conj(K) = K-check, measured as a weighted relative L2 gap
    const vl::VoiceField Ki = vl::check_inverse(K);
    double num = 0.0, den = 0.0;
    const vl::GroupGrid& g = *K.grid;
    for (std::size_t ib = 0; ib < g.n_b(); ++ib)
        for (std::size_t ia = 0; ia < g.n_a(); ++ia)
            for (std::size_t il = 0; il < g.n_phi; ++il) {
                const double w = g.quad_weight(ib, ia, il);
                num += std::norm(std::conj(K.at(ib, ia, il)) - Ki.at(ib, ia, il)) * w;
                den += std::norm(K.at(ib, ia, il)) * w;
            }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

int run_command(const json& cfg, const std::filesystem::path& out_dir, std::uint64_t seed) {
    const std::string command = cfg.value("command", "");
    if (command.empty()) config_error("missing 'command'");

    if (command == "selftest") {
        vl::SelftestConfig sc;
        sc.seed = seed;
        sc.out_dir = out_dir;
        const vl::SelftestReport report = vl::run_selftest(sc);
        return report.all_pass ? 0 : 2;
    }

    const vl::Representation rep = parse_rep(cfg.value("rep", json::object()));
    const vl::GridParams params = parse_grid(cfg.value("grid", json::object()));
    const vl::GridPtr grid = vl::build_grid(grid_spec_for(rep), params);
    const vl::Weight weight = parse_weight(cfg.value("weight", "one"));
    vl::Rng rng(seed);

    if (command == "kernel") {
        const vl::VoiceField K = vl::kernel(rep, grid);
        vl::io::write_field_csv(K, out_dir / "kernel.csv");
        vl::io::ordered_json j;
        j["symmetry_residual"] = vl::io::rounded(field_symmetry_residual(K));
        vl::io::write_json(j, out_dir / "kernel_report.json");
        return 0;
    }
    if (command == "admissible") {
        const auto [nrep, report] = vl::normalize_admissible(rep);
        vl::io::write_json(vl::io::to_json(report), out_dir / "admissibility.json");
        return report.admissible ? 0 : 2;
    }
    if (command == "voice" || command == "reproduce" || command == "coorbit") {
        const int count = cfg.value("count", command == "coorbit" ? 5 : 1);
        std::vector<double> ps = cfg.value("ps", std::vector<double>{2.0});
        const vl::SpectralProfile env = default_envelope(rep);
        const double membership_tol =
            cfg.value("tolerances", json::object()).value("membership", 1e-2);

        if (rep.kind == vl::RepKind::Schrodingerlet) {
            if (command != "reproduce" && command != "voice")
                config_error("coorbit batches use 1-D representations");
        }
        std::string batch = "signal_id,p,coorbit_norm,residual,verdict\n";
        double worst_residual = 0.0;
        for (int i = 0; i < count; ++i) {
            vl::Signal1D v = vl::random_bandlimited_signal(grid->b_axis, env, rng);
            if (rep.kind == vl::RepKind::Schrodingerlet) {
                vl::Signal2D v2;
                for (int n = -2; n <= 2; ++n)
                    v2.modes.emplace(n, vl::random_bandlimited_signal(
                                            grid->b_axis,
                                            vl::dilated(vl::lognormal_band(std::pow(2.0, -1.5), 0.12,
                                                                           false),
                                                        rep.mode_scale.count(n)
                                                            ? rep.mode_scale.at(n)
                                                            : 1.0),
                                            rng));
                const vl::VoiceField f = vl::voice(v2, rep, grid);
                if (command == "voice" && i == 0)
                    vl::io::write_field_csv(f, out_dir / "voice.csv");
                if (command != "voice") {
                    const vl::VoiceField K = vl::kernel(rep, grid);
                    worst_residual = std::max(worst_residual, vl::reproduce(f, K).second);
                }
                continue;
            }
            const vl::VoiceField f = vl::voice(v, rep, grid);
            if (command == "voice" && i == 0) vl::io::write_field_csv(f, out_dir / "voice.csv");
            if (command == "reproduce") {
                const vl::VoiceField K = vl::kernel(rep, grid);
                worst_residual = std::max(worst_residual, vl::reproduce(f, K).second);
            }
            if (command == "coorbit") {
                for (double p : ps) {
                    const vl::CoorbitReport rr = vl::coorbit_norm_report(v, rep, grid, p, weight);
                    const char* verdict = rr.membership_residual < membership_tol ? "member" : "outside";
                    batch += std::to_string(i) + "," + vl::format_sig(p) + "," +
                             vl::format_sig(rr.coorbit_norm) + "," +
                             vl::format_sig(rr.membership_residual) + "," + verdict + "\n";
                }
            }
        }
        if (command == "coorbit") {
            std::filesystem::create_directories(out_dir);
            std::ofstream out(out_dir / "coorbit_batch.csv", std::ios::trunc);
            out << batch;
        }
        if (command == "reproduce") {
            vl::io::ordered_json j;
            j["reproducing_residual"] = vl::io::rounded(worst_residual);
            j["membership_tol"] = membership_tol;
            vl::io::write_json(j, out_dir / "reproduce.json");
            return worst_residual < membership_tol ? 0 : 2;
        }
        return 0;
    }
    if (command == "norms") {
        std::vector<double> ps = cfg.value("ps", std::vector<double>{1.0, 2.0});
        const json wj = cfg.value("windows", json::object());
        reject_unknown(wj, {"first", "last"}, "windows");
        const double first = wj.value("first", 16.0);
        const double last = wj.value("last", params.b_halfwidth);
        std::vector<double> windows;
        for (double w = first; w <= last * (1.0 + 1e-9); w *= 2.0) windows.push_back(w);
        if (windows.size() < 2) config_error("windows: need at least two dyadic windows");

        const vl::VoiceField K = vl::kernel(rep, grid);
        const auto rows = vl::integrability_profile(K, ps, weight, windows);
        std::filesystem::create_directories(out_dir);
        std::string csv = "p,verdict,last_increment,final_norm\n";
        for (const auto& row : rows)
            csv += vl::format_sig(row.p) + "," + row.verdict + "," +
                   vl::format_sig(row.last_increment) + "," + vl::format_sig(row.final_norm) + "\n";
        std::ofstream out(out_dir / "norm_verdicts.csv", std::ios::trunc);
        out << csv;
        std::string profile_csv = "halfwidth,p,partial_norm\n";
        for (double p : ps)
            vl::io::append_profile_csv(vl::window_profile(K, p, windows, weight), p, profile_csv);
        std::ofstream pout(out_dir / "norm_profiles.csv", std::ios::trunc);
        pout << profile_csv;
        return 0;
    }
    config_error("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voicelab: voice transforms and reproducing kernels on concrete groups"};
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string command_flag;

    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "seed override");
    app.add_option("command", command_flag, "command when no config file is given");

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    try {
        json cfg = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::fprintf(stderr, "error: cannot open config '%s'\n", config_path.c_str());
                return 1;
            }
            cfg = json::parse(in);
            if (!cfg.is_object()) {
                std::fprintf(stderr, "error: config root must be an object\n");
                return 1;
            }
            reject_unknown(cfg,
                           {"command", "rep", "grid", "ps", "weight", "windows", "count", "seed",
                            "out_dir", "tolerances"},
                           "config");
            if (cfg.contains("tolerances"))
                reject_unknown(cfg["tolerances"], {"membership"}, "tolerances");
        }
        if (!command_flag.empty()) cfg["command"] = command_flag;
        if (!cfg.contains("command")) config_error("missing 'command'");
        std::filesystem::path out = cfg.value("out_dir", out_dir);
        const std::uint64_t run_seed = seed_set ? seed : cfg.value("seed", std::uint64_t{0});
        // validated numerics: ps must satisfy p >= 1 before any work starts
        if (cfg.contains("ps"))
            for (double p : cfg["ps"].get<std::vector<double>>())
                if (!(p >= 1.0)) config_error("'ps' entries must satisfy p >= 1");
        return run_command(cfg, out, run_seed);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
