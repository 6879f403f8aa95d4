#pragma once

// Serialization: JSON envelopes for sampled data (grid metadata plus a
// base64 little-endian float64 interleaved complex payload), covering
// descriptions, CSV breakdowns and CSV/JSON bound reports. All float
// formatting is %.17g and all row orders are fixed, so identical inputs
// produce byte-identical files.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "alphamod/covering.hpp"
#include "alphamod/grid.hpp"
#include "alphamod/spaces.hpp"
#include "alphamod/verify.hpp"

namespace alphamod {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- base64 ------------------------------------------------------------------

namespace detail {
inline const char* b64_alphabet() {
    return "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}
}  // namespace detail

inline std::string base64_encode(const unsigned char* data, std::size_t len) {
    const char* tab = detail::b64_alphabet();
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= len; i += 3) {
        unsigned v = unsigned(data[i]) << 16 | unsigned(data[i + 1]) << 8 | data[i + 2];
        out.push_back(tab[v >> 18]);
        out.push_back(tab[(v >> 12) & 63]);
        out.push_back(tab[(v >> 6) & 63]);
        out.push_back(tab[v & 63]);
    }
    if (i + 1 == len) {
        unsigned v = unsigned(data[i]) << 16;
        out.push_back(tab[v >> 18]);
        out.push_back(tab[(v >> 12) & 63]);
        out += "==";
    } else if (i + 2 == len) {
        unsigned v = unsigned(data[i]) << 16 | unsigned(data[i + 1]) << 8;
        out.push_back(tab[v >> 18]);
        out.push_back(tab[(v >> 12) & 63]);
        out.push_back(tab[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

inline std::vector<unsigned char> base64_decode(const std::string& text) {
    int rev[256];
    std::memset(rev, -1, sizeof rev);
    const char* tab = detail::b64_alphabet();
    for (int i = 0; i < 64; ++i) rev[(unsigned char)tab[i]] = i;
    std::vector<unsigned char> out;
    unsigned acc = 0;
    int bits = 0;
    for (unsigned char c : text) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        int v = rev[c];
        if (v < 0) throw std::invalid_argument("base64_decode: invalid character");
        acc = acc << 6 | unsigned(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back((unsigned char)(acc >> bits & 0xff));
        }
    }
    return out;
}

// complex payload <-> bytes, little endian float64 pairs
inline std::string encode_complex(const std::vector<cdouble>& values) {
    static_assert(sizeof(double) == 8);
    std::vector<unsigned char> bytes(values.size() * 16);
    for (std::size_t i = 0; i < values.size(); ++i) {
        double re = values[i].real(), im = values[i].imag();
        std::memcpy(&bytes[i * 16], &re, 8);
        std::memcpy(&bytes[i * 16 + 8], &im, 8);
    }
    return base64_encode(bytes.data(), bytes.size());
}

inline std::vector<cdouble> decode_complex(const std::string& payload, std::size_t expect) {
    auto bytes = base64_decode(payload);
    if (bytes.size() != expect * 16)
        throw std::invalid_argument("decode_complex: payload size mismatch");
    std::vector<cdouble> out(expect);
    for (std::size_t i = 0; i < expect; ++i) {
        double re, im;
        std::memcpy(&re, &bytes[i * 16], 8);
        std::memcpy(&im, &bytes[i * 16 + 8], 8);
        out[i] = {re, im};
    }
    return out;
}

// ---- JSON envelopes ------------------------------------------------------------

inline nlohmann::json grid_to_json(const GridSpec& g) {
    return {{"dim", g.dim}, {"points_per_axis", g.n}, {"period", g.period}};
}

inline GridSpec grid_from_json(const nlohmann::json& j) {
    return make_grid(j.at("dim").get<int>(), j.at("points_per_axis").get<int>(),
                     j.at("period").get<double>());
}

inline nlohmann::json function_to_json(const SampledFunction& f) {
    return {{"type", "sampled_function"},
            {"grid", grid_to_json(f.grid)},
            {"domain", f.domain == Domain::Space ? "space" : "frequency"},
            {"data", encode_complex(f.values)}};
}

inline SampledFunction function_from_json(const nlohmann::json& j) {
    if (j.at("type").get<std::string>() != "sampled_function")
        throw std::invalid_argument("function_from_json: wrong envelope type");
    GridSpec g = grid_from_json(j.at("grid"));
    std::string dom = j.at("domain").get<std::string>();
    SampledFunction f(g, dom == "space" ? Domain::Space : Domain::Frequency);
    f.values = decode_complex(j.at("data").get<std::string>(), g.size());
    return f;
}

inline const char* symbol_domain_name(SymbolDomain d) {
    switch (d) {
        case SymbolDomain::XXi: return "x-xi";
        case SymbolDomain::YXi: return "y-xi";
        case SymbolDomain::XEta: return "x-eta";
        case SymbolDomain::YEta: return "y-eta";
    }
    return "x-xi";
}

inline SymbolDomain symbol_domain_parse(const std::string& s) {
    if (s == "x-xi") return SymbolDomain::XXi;
    if (s == "y-xi") return SymbolDomain::YXi;
    if (s == "x-eta") return SymbolDomain::XEta;
    if (s == "y-eta") return SymbolDomain::YEta;
    throw std::invalid_argument("unknown symbol domain tag: " + s);
}

inline nlohmann::json symbol_to_json(const SampledSymbol& s) {
    return {{"type", "sampled_symbol"},
            {"grid", grid_to_json(s.grid)},
            {"domain", symbol_domain_name(s.domain)},
            {"data", encode_complex(s.values)}};
}

inline SampledSymbol symbol_from_json(const nlohmann::json& j) {
    if (j.at("type").get<std::string>() != "sampled_symbol")
        throw std::invalid_argument("symbol_from_json: wrong envelope type");
    GridSpec g = grid_from_json(j.at("grid"));
    SampledSymbol s(g, symbol_domain_parse(j.at("domain").get<std::string>()));
    s.values = decode_complex(j.at("data").get<std::string>(), g.size() * g.size());
    return s;
}

inline nlohmann::json covering_to_json(const Covering& cov, bool with_windows = true) {
    nlohmann::json pieces = nlohmann::json::array();
    for (const auto& p : cov.pieces) {
        nlohmann::json jp = {{"id", p.id},
                             {"center", {p.center[0], p.center[1]}},
                             {"r_q", p.inner_radius},
                             {"R_q", p.outer_radius},
                             {"xi_q", {p.rep[0], p.rep[1]}},
                             {"weight", p.weight},
                             {"measure", p.measure}};
        if (with_windows) {
            std::vector<cdouble> w(p.window_xi.begin(), p.window_xi.end());
            jp["window"] = encode_complex(w);
        }
        pieces.push_back(jp);
    }
    return {{"alpha", cov.alpha},
            {"grid", grid_to_json(cov.grid)},
            {"band", cov.band},
            {"pieces", pieces}};
}

inline nlohmann::json admissibility_to_json(const AdmissibilityReport& r) {
    return {{"alpha", r.alpha},
            {"grid_n", r.grid_n},
            {"piece_count", r.piece_count},
            {"n0", r.n0},
            {"n0_enlarged_1", r.n0_enlarged_1},
            {"n0_enlarged_2", r.n0_enlarged_2},
            {"k_bound", r.k_bound},
            {"measure_ratio_lo", r.measure_ratio_lo},
            {"measure_ratio_hi", r.measure_ratio_hi},
            {"ratio24_r_lo", r.ratio24_r_lo},
            {"ratio24_r_hi", r.ratio24_r_hi},
            {"ratio24_R_lo", r.ratio24_R_lo},
            {"ratio24_R_hi", r.ratio24_R_hi},
            {"kappa_within", r.kappa_within},
            {"kappa_neighbor", r.kappa_neighbor},
            {"unit_ball_volume", r.unit_ball_volume},
            {"partition_residual", r.partition_residual}};
}

// ---- CSV ------------------------------------------------------------------------

inline std::string breakdown_to_csv(const NormBreakdown& b) {
    std::string out = "piece_id_x,piece_id_xi,weight,band_sup,contribution\n";
    for (const auto& r : b.rows) {
        out += std::to_string(r.piece_x) + ",";
        out += (r.piece_xi < 0 ? std::string() : std::to_string(r.piece_xi)) + ",";
        out += fmt17(r.weight) + "," + fmt17(r.band_norm) + "," + fmt17(r.contribution) + "\n";
    }
    out += "total,,,," + fmt17(b.total) + "\n";
    return out;
}

inline std::string reports_to_csv(const std::vector<BoundReport>& reports) {
    std::string out = "check,alpha,trial,seed,lhs,rhs,ratio,grid_N\n";
    for (const auto& rep : reports) {
        auto emit = [&](const BoundRow& r) {
            out += rep.check + ",";
            out += (rep.has_alpha ? fmt17(rep.alpha) : std::string("-")) + ",";
            out += std::to_string(r.trial) + "," + std::to_string(r.seed) + ",";
            if (r.skipped)
                out += "skipped,skipped,skipped,";
            else
                out += fmt17(r.lhs) + "," + fmt17(r.rhs) + "," + fmt17(r.ratio) + ",";
            out += std::to_string(r.grid_n) + "\n";
        };
        for (const auto& r : rep.rows) emit(r);
        for (const auto& r : rep.refined_rows) emit(r);
    }
    return out;
}

inline nlohmann::json report_summary_json(const BoundReport& rep) {
    nlohmann::json j = {{"check", rep.check},
                        {"grid_n", rep.grid_n},
                        {"max_ratio", rep.max_ratio},
                        {"median_ratio", rep.median_ratio},
                        {"pass", rep.pass}};
    if (rep.has_alpha) j["alpha"] = rep.alpha;
    if (!rep.refined_rows.empty()) {
        j["max_ratio_refined"] = rep.max_ratio_refined;
        j["refinement_drift"] = rep.refinement_drift;
    }
    if (rep.ceiling > 0) j["ceiling"] = rep.ceiling;
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(contents.data(), std::streamsize(contents.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace alphamod
