#pragma once

// Bundled per-case data: closed-form surds, root polynomials, the
// representative component matrix, and the published permutation actions.

#include "pforge/roots.hpp"
#include "pforge/classes.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <variant>

namespace pforge {

using nlohmann::json;

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// (a0 + a1*sqrt(D0) + c*u*sqrt(b0 + b1*sqrt(D0))) / den, u = i or 1.
struct ClosedVal {
    BigRat a0{0}, a1{0}, c{0}, b0{0}, b1{0}, den{1};
    bool imag = false;

    template <typename C>
    C eval(std::int64_t D0) const {
        using R = typename scalar_of<C>::type;
        R sd = sqrt(R(D0));
        auto rat = [&](const BigRat& q) {
            if constexpr (std::is_same_v<R, double>) return to_double(q);
            else return to_mp(q);
        };
        R outer = rat(a0) + rat(a1) * sd;
        R inner = rat(b0) + rat(b1) * sd;
        R root = sqrt(inner < 0 ? -inner : inner);
        bool ineg = inner < 0;
        C val;
        if (imag || ineg) val = C(outer, rat(c) * root);
        else val = C(outer + rat(c) * root, R(0));
        return val / rat(den);
    }

    QuadExt surd(std::int64_t D0) const {
        if (!(c == 0)) throw DataError("value is not a pure quadratic surd");
        return QuadExt(a0 / den, a1 / den, D0);
    }
};

using Perm = std::map<int, int>; // 1-based, identity off-support

struct CaseData {
    std::string name;
    int n = 0;
    Group group = Group::S4;
    std::int64_t D0 = 0;
    std::map<char, IntPoly> families;
    std::map<std::string, ClosedVal> closed;
    std::vector<std::vector<std::string>> matrix; // [sigma][kappa]
    std::map<std::string, std::map<char, Perm>> actions;
    std::string invariant_symbol;

    int nu() const { return 2 * n + 1; }
};

inline std::string data_dir() {
    if (const char* env = std::getenv("PENTAGON_FORGE_DATA")) return env;
#ifdef PFORGE_DATA_DIR
    return PFORGE_DATA_DIR;
#else
    return "data";
#endif
}

inline BigRat rat_from_json(const json& j) {
    if (j.is_number_integer()) return BigRat(j.get<std::int64_t>());
    if (j.is_array() && j.size() == 2)
        return BigRat(BigInt(j[0].get<std::string>()), BigInt(j[1].get<std::string>()));
    if (j.is_string()) return BigRat(BigInt(j.get<std::string>()));
    throw DataError("bad rational in case data");
}

inline CaseData load_case(const std::string& name) {
    std::string path = data_dir() + "/cases/" + name + ".json";
    std::ifstream in(path);
    if (!in) throw DataError("cannot open case data: " + path);
    json j = json::parse(in);
    if (j.value("schema", 0) != 1) throw DataError("unsupported schema in " + path);

    CaseData cd;
    cd.name = j.at("case").get<std::string>();
    cd.n = j.at("n").get<int>();
    std::string g = j.at("group").get<std::string>();
    cd.group = g == "a4" ? Group::A4 : Group::S4;
    std::int64_t m, d0;
    squarefree_split(std::int64_t(cd.nu()) * cd.nu() + 4, m, d0);
    cd.D0 = d0;

    if (j.contains("families"))
        for (auto& [key, val] : j.at("families").items()) {
            IntPoly p;
            for (auto& c : val) {
                if (c.is_number_integer()) p.c.push_back(BigInt(c.get<std::int64_t>()));
                else p.c.push_back(BigInt(c.get<std::string>()));
            }
            cd.families[key[0]] = std::move(p);
        }

    if (j.contains("values"))
        for (auto& [key, val] : j.at("values").items()) {
            ClosedVal cv;
            cv.a0 = rat_from_json(val.value("a0", json(0)));
            cv.a1 = rat_from_json(val.value("a1", json(0)));
            cv.c = rat_from_json(val.value("c", json(0)));
            cv.b0 = rat_from_json(val.value("b0", json(0)));
            cv.b1 = rat_from_json(val.value("b1", json(0)));
            cv.den = rat_from_json(val.value("den", json(1)));
            cv.imag = val.value("imag", false);
            cd.closed[key] = cv;
        }

    if (j.contains("matrix"))
        for (auto& row : j.at("matrix")) {
            std::vector<std::string> r;
            for (auto& cell : row) r.push_back(cell.get<std::string>());
            cd.matrix.push_back(std::move(r));
        }

    if (j.contains("actions"))
        for (auto& [act, fams] : j.at("actions").items())
            for (auto& [fam, cycles] : fams.items()) {
                Perm p;
                for (auto& cyc : cycles) {
                    int len = int(cyc.size());
                    for (int i = 0; i < len; ++i) p[cyc[i].get<int>()] = cyc[(i + 1) % len].get<int>();
                }
                cd.actions[act][fam[0]] = std::move(p);
            }

    cd.invariant_symbol = j.value("invariant", "x");
    return cd;
}

inline std::vector<std::string> case_names() {
    return {"h2", "h3", "z5", "z7", "z9", "z11-2", "z11-10", "z13", "z15"};
}

// Split a matrix symbol like "y12" into family letter and 1-based index.
inline std::pair<char, int> split_symbol(const std::string& sym) {
    char fam = sym[0];
    if (sym.size() == 1) return {fam, 0};
    return {fam, std::stoi(sym.substr(1))};
}

// Apply a published permutation action to every indexed symbol of a matrix.
inline std::vector<std::vector<std::string>> permuted_matrix(const CaseData& cd, const std::string& action) {
    auto it = cd.actions.find(action);
    if (it == cd.actions.end()) throw DataError("case has no action " + action);
    auto out = cd.matrix;
    for (auto& row : out)
        for (auto& sym : row) {
            auto [fam, idx] = split_symbol(sym);
            if (idx == 0) continue;
            auto fit = it->second.find(fam);
            if (fit == it->second.end()) continue;
            auto pit = fit->second.find(idx);
            if (pit != fit->second.end()) sym = fam + std::to_string(pit->second);
        }
    return out;
}

}  // namespace pforge
