// JSON serialization and parsing for the public data types: Cartan
// super-data, multiparameter matrices, realizations, twist/cocycle
// matrices, and polynomial multiparameters.  Parsing validates the
// structural invariants of each type, so a loaded value is as good as
// a constructed one.
#pragma once

#include "deform.hpp"
#include "poly.hpp"

#include <json.hpp>

#include <string>

namespace mpq {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Serialization.
// ---------------------------------------------------------------------------

inline Json to_json(const Rat& r) { return Json(to_string(r)); }

inline Json to_json(const ExponentPoly& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json mono = Json::object();
        for (const auto& [a, e] : m) mono[AtomTable::name(a)] = e;
        terms.push_back(Json{{"coeff", to_string(c)}, {"monomial", mono}});
    }
    return terms;
}

inline Json to_json(const PolyMatrix& m) {
    Json rows = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& e : row) r.push_back(to_json(e));
        rows.push_back(r);
    }
    return rows;
}

inline Json to_json(const MultiparamMatrix& m) { return to_json(m.entries); }

inline Json to_json(const CartanSuperDatum& d) {
    Json j;
    j["type"] = type_name(d.type);
    j["rank"] = d.rank;
    j["cartan"] = d.A;
    j["parity"] = d.parity;
    Json sym = Json::array();
    for (const Rat& x : d.d) sym.push_back(to_string(x));
    j["symmetrizer"] = sym;
    j["epsilon"] = d.epsilon;
    j["diagram_order"] = d.diagram_order;
    return j;
}

inline Json to_json(const Realization& R) {
    Json j;
    j["datum"] = to_json(R.datum);
    j["P"] = to_json(R.P);
    j["t"] = R.t;
    j["root"] = to_json(R.root);
    j["cplus"] = to_json(R.cplus);
    j["cminus"] = to_json(R.cminus);
    return j;
}

inline Json to_json(const TwistData& d) { return Json{{"phi", to_json(d.phi)}}; }

inline Json to_json(const CocycleData& d) { return Json{{"chi", to_json(d.chi)}}; }

inline Json to_json(const PolyMultiparam& q) {
    Json j;
    j["datum"] = to_json(q.datum);
    j["exponents"] = to_json(q.exponents);
    if (!q.specialization.empty()) {
        Json spec = Json::object();
        for (const auto& [a, v] : q.specialization) spec[AtomTable::name(a)] = to_string(v);
        j["specialization"] = spec;
    }
    j["not_root_of_unity"] = q.not_root_of_unity;
    return j;
}

// ---------------------------------------------------------------------------
// Parsing.  Every reader takes a location string used for error
// reporting; malformed structure raises ParseError naming the path.
// ---------------------------------------------------------------------------

namespace io_detail {

[[noreturn]] inline void fail(const std::string& loc, const std::string& what) {
    throw ParseError(loc + ": " + what);
}

inline const Json& field(const Json& j, const char* key, const std::string& loc) {
    if (!j.is_object()) fail(loc, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(loc, std::string("missing field '") + key + "'");
    return *it;
}

inline long integer_at(const Json& j, const std::string& loc) {
    if (!j.is_number_integer()) fail(loc, "expected an integer");
    return j.get<long>();
}

inline Rat rat_at(const Json& j, const std::string& loc) {
    if (!j.is_string()) fail(loc, "expected a rational literal string");
    try {
        return parse_rat(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        fail(loc, e.what());
    }
}

} // namespace io_detail

inline ExponentPoly parse_poly(const Json& j, const std::string& loc) {
    using namespace io_detail;
    if (!j.is_array()) fail(loc, "expected an array of terms");
    ExponentPoly out;
    int idx = 0;
    for (const Json& term : j) {
        std::string tl = loc + "[" + std::to_string(idx++) + "]";
        Rat c = rat_at(field(term, "coeff", tl), tl + ".coeff");
        const Json& mj = field(term, "monomial", tl);
        if (!mj.is_object()) fail(tl + ".monomial", "expected an object");
        Monomial m;
        for (const auto& [name, e] : mj.items())
            m[named_atom(name)] = integer_at(e, tl + ".monomial." + name);
        out += ExponentPoly::monomial(std::move(m), c);
    }
    return out;
}

inline PolyMatrix parse_poly_matrix(const Json& j, const std::string& loc) {
    using namespace io_detail;
    if (!j.is_array()) fail(loc, "expected an array of rows");
    PolyMatrix m;
    int i = 0;
    for (const Json& row : j) {
        std::string rl = loc + "[" + std::to_string(i++) + "]";
        if (!row.is_array()) fail(rl, "expected a row array");
        std::vector<ExponentPoly> r;
        int k = 0;
        for (const Json& e : row) r.push_back(parse_poly(e, rl + "[" + std::to_string(k++) + "]"));
        if (!m.empty() && r.size() != m.front().size())
            fail(rl, "ragged rows: expected " + std::to_string(m.front().size()) +
                         " entries, got " + std::to_string(r.size()));
        m.push_back(std::move(r));
    }
    return m;
}

inline CartanSuperDatum parse_datum(const Json& j, const std::string& loc = "datum") {
    using namespace io_detail;
    CartanSuperDatum d;
    const Json& tj = field(j, "type", loc);
    if (!tj.is_string()) fail(loc + ".type", "expected a type name string");
    auto type = parse_type(tj.get<std::string>());
    if (!type) fail(loc + ".type", "unknown type '" + tj.get<std::string>() + "'");
    d.type = *type;
    d.rank = static_cast<int>(integer_at(field(j, "rank", loc), loc + ".rank"));
    if (d.rank < 1) fail(loc + ".rank", "rank must be positive");

    const Json& aj = field(j, "cartan", loc);
    if (!aj.is_array() || static_cast<int>(aj.size()) != d.rank)
        fail(loc + ".cartan", "expected " + std::to_string(d.rank) + " rows");
    for (int i = 0; i < d.rank; ++i) {
        const Json& row = aj[i];
        std::string rl = loc + ".cartan[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<int>(row.size()) != d.rank)
            fail(rl, "expected " + std::to_string(d.rank) + " entries");
        std::vector<long> r;
        for (int k = 0; k < d.rank; ++k)
            r.push_back(integer_at(row[k], rl + "[" + std::to_string(k) + "]"));
        d.A.push_back(std::move(r));
    }
    auto int_vec = [&](const char* key) {
        const Json& v = field(j, key, loc);
        std::string vl = loc + "." + key;
        if (!v.is_array() || static_cast<int>(v.size()) != d.rank)
            fail(vl, "expected " + std::to_string(d.rank) + " entries");
        std::vector<long> out;
        for (int k = 0; k < d.rank; ++k)
            out.push_back(integer_at(v[k], vl + "[" + std::to_string(k) + "]"));
        return out;
    };
    for (long p : int_vec("parity")) {
        if (p != 0 && p != 1) fail(loc + ".parity", "parities are 0 or 1");
        d.parity.push_back(static_cast<int>(p));
    }
    const Json& sj = field(j, "symmetrizer", loc);
    if (!sj.is_array() || static_cast<int>(sj.size()) != d.rank)
        fail(loc + ".symmetrizer", "expected " + std::to_string(d.rank) + " entries");
    for (int k = 0; k < d.rank; ++k)
        d.d.push_back(rat_at(sj[k], loc + ".symmetrizer[" + std::to_string(k) + "]"));
    d.epsilon = int_vec("epsilon");
    for (long o : int_vec("diagram_order")) d.diagram_order.push_back(static_cast<int>(o));

    // Cross-check against the catalogue constructor: the Cartan matrix
    // and symmetrizer must be the ones this type and rank dictate.
    std::set<int> grey;
    for (int i = 1; i <= d.rank; ++i)
        if (d.parity[i - 1]) grey.insert(i);
    CartanSuperDatum ref;
    try {
        std::vector<long> eps = d.epsilon;
        if (d.type == TypeTag::F4 || d.type == TypeTag::G3) {
            std::set<int> no_grey;
            ref = build_datum(d.type, d.rank, eps, no_grey);
        } else {
            std::set<int> free_grey = grey;
            // Forced-grey nodes are set by the constructor itself.
            CartanSuperDatum plain = build_datum(d.type, d.rank, eps);
            for (int i = 1; i <= d.rank; ++i)
                if (plain.parity[i - 1]) free_grey.erase(i);
            ref = build_datum(d.type, d.rank, eps, free_grey);
        }
    } catch (const Error& e) {
        fail(loc, std::string("datum rejected: ") + e.what());
    }
    if (!(ref == d) || ref.diagram_order != d.diagram_order)
        fail(loc, "fields do not match the catalogue entry for this type/rank");
    return d;
}

inline MultiparamMatrix parse_matrix(const Json& j, const std::string& loc = "matrix") {
    MultiparamMatrix m;
    m.entries = parse_poly_matrix(j, loc);
    if (m.size() > 0 && m.entries.front().size() != static_cast<size_t>(m.size()))
        io_detail::fail(loc, "matrix is not square");
    return m;
}

inline Realization parse_realization(const Json& j, const std::string& loc = "realization") {
    using namespace io_detail;
    Realization R;
    R.datum = parse_datum(field(j, "datum", loc), loc + ".datum");
    R.P = parse_matrix(field(j, "P", loc), loc + ".P");
    R.t = static_cast<int>(integer_at(field(j, "t", loc), loc + ".t"));
    R.root = parse_poly_matrix(field(j, "root", loc), loc + ".root");
    R.cplus = parse_poly_matrix(field(j, "cplus", loc), loc + ".cplus");
    R.cminus = parse_poly_matrix(field(j, "cminus", loc), loc + ".cminus");
    for (const PolyMatrix* block : {&R.root, &R.cplus, &R.cminus})
        for (const auto& row : *block)
            if (static_cast<int>(row.size()) != R.t)
                fail(loc, "block width differs from the stated rank t");
    // Structural pass: the coroot/root pairing must reproduce P, or the
    // data does not describe a realization at all.
    R.validate();
    return R;
}

inline TwistData parse_twist(const Json& j, const std::string& loc = "twist") {
    TwistData d{parse_poly_matrix(io_detail::field(j, "phi", loc), loc + ".phi")};
    d.validate();
    return d;
}

inline CocycleData parse_cocycle(const Json& j, const std::string& loc = "cocycle") {
    CocycleData d{parse_poly_matrix(io_detail::field(j, "chi", loc), loc + ".chi")};
    detail::require_antisymmetric(d.chi, "cocycle");
    return d;
}

inline PolyMultiparam parse_poly_multiparam(const Json& j, const std::string& loc = "poly") {
    using namespace io_detail;
    PolyMultiparam q;
    q.datum = parse_datum(field(j, "datum", loc), loc + ".datum");
    q.exponents = parse_matrix(field(j, "exponents", loc), loc + ".exponents");
    if (j.contains("specialization")) {
        const Json& sj = j["specialization"];
        if (!sj.is_object()) fail(loc + ".specialization", "expected an object");
        for (const auto& [name, v] : sj.items())
            q.specialization[named_atom(name)] = rat_at(v, loc + ".specialization." + name);
    }
    if (j.contains("not_root_of_unity")) {
        const Json& f = j["not_root_of_unity"];
        if (!f.is_boolean()) fail(loc + ".not_root_of_unity", "expected a boolean");
        q.not_root_of_unity = f.get<bool>();
    }
    q.validate();
    return q;
}

// Parses raw text into a JSON document, wrapping syntax errors into
// ParseError with the byte offset of the offending character.
inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("json syntax error at byte " + std::to_string(e.byte) + ": " +
                         e.what());
    }
}

} // namespace mpq
