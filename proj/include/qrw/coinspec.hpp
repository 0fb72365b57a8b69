#pragma once

#include <json.hpp>

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "coin.hpp"

namespace qrw {

struct CoinSpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Resolved coin configuration: per-site coins with a constant-tail default.
struct CoinSpec {
    CoinSequence coins = CoinSequence(identity_coin());
    std::string description;
};

namespace coinspec_detail {

inline cplx parse_complex_pair(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw CoinSpecError("expected [re, im] pair at " + where);
    return cplx(j[0].get<double>(), j[1].get<double>());
}

inline Mat2 parse_matrix_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
        !j[1].is_array() || j[1].size() != 2)
        throw CoinSpecError("expected 2x2 matrix of [re, im] pairs at " + where);
    Mat2 m;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            m(r, c) = parse_complex_pair(
                j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    return m;
}

inline Mat2 preset_matrix(const std::string& name) {
    if (name == "hadamard") return hadamard_coin().entries;
    if (name == "hmod") return hmod_coin().entries;
    if (name == "identity") return identity_coin().entries;
    throw CoinSpecError("unknown coin preset '" + name + "' (hadamard | hmod | identity)");
}

/// Inline matrix text: [[re,im],[re,im];[re,im],[re,im]] (rows split by ';').
inline Mat2 parse_inline_matrix(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.size() < 4 || s.front() != '[' || s.back() != ']')
        throw CoinSpecError("malformed coin matrix at character 0: expected '[...]'");
    std::string body = s.substr(1, s.size() - 2);
    auto semi = body.find(';');
    if (semi == std::string::npos)
        throw CoinSpecError("malformed coin matrix at character " + std::to_string(body.size()) +
                            ": expected ';' between rows");
    auto parse_row = [](const std::string& row, size_t base) {
        std::array<cplx, 2> out;
        size_t pos = 0;
        for (int c = 0; c < 2; ++c) {
            size_t open = row.find('[', pos);
            size_t close = row.find(']', open == std::string::npos ? pos : open);
            if (open == std::string::npos || close == std::string::npos)
                throw CoinSpecError("malformed coin matrix at character " +
                                    std::to_string(base + pos) + ": expected [re,im]");
            std::string cell = row.substr(open + 1, close - open - 1);
            auto comma = cell.find(',');
            if (comma == std::string::npos)
                throw CoinSpecError("malformed coin matrix at character " +
                                    std::to_string(base + open) + ": entry is not [re,im]");
            try {
                out[c] = cplx(std::stod(cell.substr(0, comma)), std::stod(cell.substr(comma + 1)));
            } catch (const std::exception&) {
                throw CoinSpecError("malformed coin matrix at character " +
                                    std::to_string(base + open) + ": bad number");
            }
            pos = close + 1;
        }
        return out;
    };
    auto r0 = parse_row(body.substr(0, semi), 1);
    auto r1 = parse_row(body.substr(semi + 1), semi + 2);
    return Mat2(r0[0], r0[1], r1[0], r1[1]);
}

}  // namespace coinspec_detail

/// A coin spec is a preset name, an inline matrix
/// [[re,im],[re,im];[re,im],[re,im]], or a JSON document with "preset" or
/// "matrix" and an optional per-site "sites" table over a default.
inline CoinSpec parse_coin_spec(const std::string& text) {
    using nlohmann::json;
    namespace det = coinspec_detail;
    CoinSpec out;
    std::string trimmed = text;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\n\r"));
    if (trimmed.empty()) throw CoinSpecError("empty coin spec");
    if (std::isalpha(static_cast<unsigned char>(trimmed[0]))) {
        std::string name = trimmed.substr(0, trimmed.find_last_not_of(" \t\n\r") + 1);
        out.coins = CoinSequence(validate_coin(det::preset_matrix(name)));
        out.description = name;
        return out;
    }
    if (trimmed[0] == '{') {
        json doc;
        try {
            doc = json::parse(trimmed);
        } catch (const json::parse_error& e) {
            throw CoinSpecError(std::string("coin spec JSON parse error: ") + e.what());
        }
        Mat2 def;
        if (doc.contains("preset"))
            def = det::preset_matrix(doc["preset"].get<std::string>());
        else if (doc.contains("matrix"))
            def = det::parse_matrix_json(doc["matrix"], "matrix");
        else
            throw CoinSpecError("coin spec JSON needs 'preset' or 'matrix'");
        CoinSequence seq(validate_coin(def));
        if (doc.contains("sites")) {
            for (auto& [key, val] : doc["sites"].items()) {
                int site = 0;
                try {
                    site = std::stoi(key);
                } catch (const std::exception&) {
                    throw CoinSpecError("site key '" + key + "' is not an integer");
                }
                seq.set(site, validate_coin(det::parse_matrix_json(val, "sites." + key), site));
            }
        }
        out.coins = seq;
        out.description = doc.contains("preset") ? doc["preset"].get<std::string>() : "custom";
        return out;
    }
    if (trimmed[0] == '[') {
        out.coins = CoinSequence(validate_coin(det::parse_inline_matrix(trimmed)));
        out.description = "inline";
        return out;
    }
    throw CoinSpecError("unrecognized coin spec '" + text + "'");
}

/// Coin argument resolution: an existing file is read and parsed, anything
/// else is treated as an inline spec.
inline CoinSpec load_coin_spec(const std::string& arg) {
    std::ifstream in(arg);
    if (in.good()) {
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_coin_spec(ss.str());
    }
    return parse_coin_spec(arg);
}

/// State file: JSON list of {site, spin: "up"|"down", amp: [re, im]},
/// renormalized on load (warning to stderr past 1e-9).
inline WaveFunction load_state_json(const std::string& text, WalkLattice lat,
                                    double* renorm_drift = nullptr) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CoinSpecError(std::string("state parse error: ") + e.what());
    }
    if (!doc.is_array()) throw CoinSpecError("state must be a JSON list");
    WaveFunction psi;
    for (const auto& item : doc) {
        int site = item.at("site").get<int>();
        std::string spin_s = item.at("spin").get<std::string>();
        if (spin_s != "up" && spin_s != "down")
            throw CoinSpecError("spin must be 'up' or 'down'");
        if (lat == WalkLattice::HalfLine && site < 0)
            throw CoinSpecError("negative site on the half line");
        Spin spin = spin_s == "up" ? Spin::Up : Spin::Down;
        psi[PureState{site, spin}] += coinspec_detail::parse_complex_pair(item.at("amp"), "amp");
    }
    double norm = 0.0;
    for (const auto& [st, v] : psi) norm += std::norm(v);
    norm = std::sqrt(norm);
    if (norm == 0.0) throw CoinSpecError("state is identically zero");
    if (renorm_drift) *renorm_drift = std::abs(norm - 1.0);
    for (auto& [st, v] : psi) v /= norm;
    return psi;
}

}  // namespace qrw
