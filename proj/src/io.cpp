#include "voicelab/io.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace voicelab::io {

namespace {

void open_out(std::ofstream& out, const std::filesystem::path& path, bool binary = false) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out.open(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
}

}  // namespace

double rounded(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(format_sig(x).c_str(), nullptr);
}

void write_signal_csv(const Signal1D& f, const std::filesystem::path& path) {
    std::ofstream out;
    open_out(out, path);
    out << "x,real,imag\n";
    for (std::size_t j = 0; j < f.axis.n; ++j)
        out << format_sig(f.axis.at(j)) << ',' << format_sig(f.samples[j].real()) << ','
            << format_sig(f.samples[j].imag()) << '\n';
}

Signal1D read_signal_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> xs;
    std::vector<cdouble> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string sx, sr, si;
        if (!std::getline(ss, sx, ',') || !std::getline(ss, sr, ',') || !std::getline(ss, si, ','))
            throw std::runtime_error("malformed signal csv: " + path.string());
        xs.push_back(std::strtod(sx.c_str(), nullptr));
        samples.emplace_back(std::strtod(sr.c_str(), nullptr), std::strtod(si.c_str(), nullptr));
    }
    if (xs.size() < 2) throw std::runtime_error("signal csv too short: " + path.string());
    Signal1D f;
    f.axis = Axis{xs.front(), xs[1] - xs[0], xs.size()};
    f.samples = std::move(samples);
    return f;
}

void write_signal_binary(const Signal1D& f, const std::filesystem::path& path) {
    std::ofstream out;
    open_out(out, path, /*binary=*/true);
    const std::uint64_t n = f.axis.n;
    out.write(reinterpret_cast<const char*>(&n), 8);
    const double hdr[2] = {f.axis.x0, f.axis.dx};
    out.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
    for (const auto& s : f.samples) {
        const double re = s.real(), im = s.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
}

Signal1D read_signal_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    double hdr[2] = {0, 0};
    in.read(reinterpret_cast<char*>(hdr), sizeof(hdr));
    Signal1D f;
    f.axis = Axis{hdr[0], hdr[1], static_cast<std::size_t>(n)};
    f.samples.resize(n);
    for (auto& s : f.samples) {
        double re = 0, im = 0;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        s = cdouble{re, im};
    }
    if (!in) throw std::runtime_error("truncated signal binary: " + path.string());
    return f;
}

void write_field_csv(const VoiceField& f, const std::filesystem::path& path) {
    std::ofstream out;
    open_out(out, path);
    const GroupGrid& g = *f.grid;
    const bool has_a = g.spec.has_scale();
    const bool has_phi = g.spec.has_angle();
    out << 'b' << (has_a ? ",a" : "") << (has_phi ? ",phi" : "") << ",real,imag\n";
    for (std::size_t ib = 0; ib < g.n_b(); ++ib)
        for (std::size_t ia = 0; ia < g.n_a(); ++ia)
            for (std::size_t il = 0; il < g.n_phi; ++il) {
                out << format_sig(g.b_axis.at(ib));
                if (has_a) out << ',' << format_sig(g.a_nodes[ia]);
                if (has_phi) out << ',' << format_sig(g.phi_node(il));
                const cdouble v = f.at(ib, ia, il);
                out << ',' << format_sig(v.real()) << ',' << format_sig(v.imag()) << '\n';
            }
}

void append_profile_csv(const std::vector<WindowPoint>& profile, double p, std::string& out) {
    for (const auto& pt : profile) {
        out += format_sig(pt.halfwidth);
        out += ',';
        out += format_sig(p);
        out += ',';
        out += format_sig(pt.partial_norm);
        out += '\n';
    }
}

void write_profile_csv(const std::vector<WindowPoint>& profile, double p,
                       const std::filesystem::path& path) {
    std::string body = "halfwidth,p,partial_norm\n";
    append_profile_csv(profile, p, body);
    std::ofstream out;
    open_out(out, path);
    out << body;
}

ordered_json to_json(const ConvReport& report) {
    ordered_json j;
    j["name"] = report.name;
    j["p"] = rounded(report.p);
    j["q"] = rounded(report.q);
    j["r"] = std::isinf(report.r) ? ordered_json("inf") : ordered_json(rounded(report.r));
    j["norm_f"] = rounded(report.norm_f);
    j["norm_g"] = rounded(report.norm_g);
    j["norm_g_check"] = rounded(report.norm_g_check);
    j["norm_result"] = rounded(report.norm_result);
    j["bound"] = rounded(report.bound);
    j["slack"] = rounded(report.slack);
    j["convolvable"] = report.convolvable;
    ordered_json res = ordered_json::object();
    for (const auto& [k, v] : report.residuals) res[k] = rounded(v);
    j["residuals"] = res;
    return j;
}

ordered_json to_json(const AdmissibilityReport& report) {
    ordered_json j;
    ordered_json constants = ordered_json::object();
    for (const auto& [n, c] : report.calderon_constants) constants[std::to_string(n)] = rounded(c);
    ordered_json factors = ordered_json::object();
    for (const auto& [n, c] : report.normalization) factors[std::to_string(n)] = rounded(c);
    j["calderon_constants"] = constants;
    j["normalization"] = factors;
    j["band_residual"] = rounded(report.band_residual);
    j["admissible"] = report.admissible;
    return j;
}

ordered_json to_json(const CoorbitReport& report) {
    ordered_json j;
    j["p"] = rounded(report.p);
    j["weight"] = report.weight_id;
    j["coorbit_norm"] = rounded(report.coorbit_norm);
    j["membership_residual"] = rounded(report.membership_residual);
    j["comparison_norm"] = rounded(report.comparison_norm);
    return j;
}

void write_json(const ordered_json& j, const std::filesystem::path& path) {
    std::ofstream out;
    open_out(out, path);
    out << j.dump(2) << '\n';
}

}  // namespace voicelab::io
