#include "shifteq/serialize.hpp"

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "shifteq/errors.hpp"
#include "shifteq/pathspace.hpp"

namespace shifteq {

namespace {

using nlohmann::json;

void expect_keys(const json& j, std::initializer_list<const char*> keys,
                 const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    for (const char* k : keys)
        if (!j.contains(k))
            throw ParseError(where + ": missing field \"" + k + "\"");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : keys)
            if (item.key() == k) known = true;
        if (!known) throw ParseError(where + ": unknown field \"" + item.key() + "\"");
    }
}

std::string parse_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where + ": expected a string");
    return j.get<std::string>();
}

json nat_to_json(const Nat& v) {
    if (v.fits_slong_p()) return json(static_cast<std::int64_t>(v.get_si()));
    return json(v.get_str());
}

json card_to_json(const Card& c) {
    return c.is_omega() ? json("w") : nat_to_json(c.finite_value());
}

Card parse_card(const json& j, const std::string& where) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "w") return Card::omega();
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError(where + ": expected a nonnegative integer or \"w\", got \"" +
                             s + "\"");
        return Card(Nat(s, 10));
    }
    if (j.is_number_unsigned())
        return Card(Nat(static_cast<unsigned long>(j.get<std::uint64_t>())));
    if (j.is_number_integer()) {
        const std::int64_t v = j.get<std::int64_t>();
        if (v < 0) throw ParseError(where + ": entries must be nonnegative");
        return Card(Nat(static_cast<long>(v)));
    }
    throw ParseError(where + ": expected a nonnegative integer or \"w\"");
}

std::size_t parse_index(const json& j, const std::string& where) {
    if (j.is_number_unsigned()) return static_cast<std::size_t>(j.get<std::uint64_t>());
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
        return static_cast<std::size_t>(j.get<std::int64_t>());
    throw ParseError(where + ": expected a nonnegative index");
}

json matrix_to_json(const CardMatrix& a) {
    if (a.n_rows() == 0 && a.n_cols() != 0)
        throw InvariantViolation(
            "a matrix with zero rows and nonzero columns has no literal form");
    json data = json::array();
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < a.n_cols(); ++j) row.push_back(card_to_json(a.at(i, j)));
        data.push_back(std::move(row));
    }
    return json{{"rows", a.rows().name}, {"cols", a.cols().name}, {"data", data}};
}

json matrix_to_json(const NatMatrix& a) { return matrix_to_json(to_card(a)); }

CardMatrix parse_card_matrix(const json& j, const std::string& where) {
    expect_keys(j, {"cols", "data", "rows"}, where);
    const std::string rows_name = parse_string(j["rows"], where + ".rows");
    const std::string cols_name = parse_string(j["cols"], where + ".cols");
    const json& data = j["data"];
    if (!data.is_array()) throw ParseError(where + ".data: expected an array of rows");
    const std::size_t n = data.size();
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!data[i].is_array())
            throw ParseError(where + ".data[" + std::to_string(i) + "]: expected an array");
        if (i == 0)
            p = data[i].size();
        else if (data[i].size() != p)
            throw ParseError(where + ".data: rows have different lengths");
    }
    CardMatrix out(IndexSet{rows_name, n}, IndexSet{cols_name, p});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < p; ++k)
            out.at(i, k) = parse_card(data[i][k], where + ".data[" + std::to_string(i) +
                                                      "][" + std::to_string(k) + "]");
    return out;
}

NatMatrix parse_nat_matrix(const json& j, const std::string& where) {
    CardMatrix m = parse_card_matrix(j, where);
    if (!all_finite(m)) throw ParseError(where + ": ω entries are not allowed here");
    return to_nat(m);
}

json path_to_json(const Path& p) {
    json out = json::array();
    for (const EdgeTriple& e : p) out.push_back(json::array({e.v, e.alpha, e.w}));
    return out;
}

Path parse_path(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array of edges");
    Path out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& e = j[i];
        const std::string ewhere = where + "[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 3)
            throw ParseError(ewhere + ": an edge is a [source, multiplicity, range] triple");
        out.push_back(EdgeTriple{parse_index(e[0], ewhere), parse_index(e[1], ewhere),
                                 parse_index(e[2], ewhere)});
    }
    return out;
}

json iso_to_json(const PathIso& iso) {
    json dom = json::array(), cod = json::array();
    for (const NatMatrix& m : iso.domain().family().matrices()) dom.push_back(matrix_to_json(m));
    for (const NatMatrix& m : iso.codomain().family().matrices()) cod.push_back(matrix_to_json(m));
    json pairs = json::array();
    for (std::size_t i = 0; i < iso.domain().size(); ++i)
        pairs.push_back(json::array(
            {path_to_json(iso.domain().path(i)), path_to_json(iso.codomain().path(iso.table()[i]))}));
    return json{{"domain", dom}, {"codomain", cod}, {"pairs", pairs}};
}

PathSpacePtr parse_space(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw ParseError(where + ": expected a nonempty array of matrices");
    std::vector<NatMatrix> mats;
    for (std::size_t i = 0; i < j.size(); ++i)
        mats.push_back(parse_nat_matrix(j[i], where + "[" + std::to_string(i) + "]"));
    return make_space(PathFamily(std::move(mats)));
}

PathIso parse_iso(const json& j, const std::string& where) {
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    expect_keys(j, {"codomain", "domain", "pairs"}, where);
    PathSpacePtr dom = parse_space(j["domain"], where + ".domain");
    PathSpacePtr cod = parse_space(j["codomain"], where + ".codomain");
    const json& pairs = j["pairs"];
    if (!pairs.is_array()) throw ParseError(where + ".pairs: expected an array");
    std::vector<std::size_t> table(dom->size(), unset);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const std::string pwhere = where + ".pairs[" + std::to_string(k) + "]";
        const json& pr = pairs[k];
        if (!pr.is_array() || pr.size() != 2)
            throw ParseError(pwhere + ": expected a [domain path, codomain path] pair");
        const Path dp = parse_path(pr[0], pwhere + "[0]");
        const Path cp = parse_path(pr[1], pwhere + "[1]");
        const auto di = dom->index_of(dp);
        if (!di)
            throw InvariantViolation(pwhere + ": domain path does not lie in the domain space");
        const auto ci = cod->index_of(cp);
        if (!ci)
            throw InvariantViolation(pwhere +
                                     ": codomain path does not lie in the codomain space");
        if (table[*di] != unset)
            throw InvariantViolation(pwhere + ": domain path is paired twice");
        table[*di] = *ci;
    }
    for (std::size_t i = 0; i < table.size(); ++i)
        if (table[i] == unset)
            throw InvariantViolation(where +
                                     ": pair list does not cover the domain (not a bijection)");
    PathIso iso(dom, cod, std::move(table));
    ValidationReport report = validate_path_iso(iso);
    if (!report.ok) throw InvariantViolation(where + ": " + report.message);
    return iso;
}

json chain_to_json(const CardChain& c) {
    json steps = json::array();
    for (const auto& [r, s] : c.steps)
        steps.push_back(json{{"r", matrix_to_json(r)}, {"s", matrix_to_json(s)}});
    return json{{"a", matrix_to_json(c.A)}, {"b", matrix_to_json(c.B)}, {"steps", steps}};
}

CardChain parse_chain(const json& j, const std::string& where) {
    expect_keys(j, {"a", "b", "steps"}, where);
    CardChain out{parse_card_matrix(j["a"], where + ".a"),
                  parse_card_matrix(j["b"], where + ".b"),
                  {}};
    const json& steps = j["steps"];
    if (!steps.is_array()) throw ParseError(where + ".steps: expected an array");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const std::string swhere = where + ".steps[" + std::to_string(i) + "]";
        expect_keys(steps[i], {"r", "s"}, swhere);
        out.steps.emplace_back(parse_card_matrix(steps[i]["r"], swhere + ".r"),
                               parse_card_matrix(steps[i]["s"], swhere + ".s"));
    }
    ValidationReport report = verify_card_chain(out);
    if (!report.ok) throw InvariantViolation(where + ": chain does not verify: " + report.message);
    return out;
}

json shift_to_json(const ConcreteShift& cs) {
    return json{{"a", matrix_to_json(cs.A)},
                {"b", matrix_to_json(cs.B)},
                {"r", matrix_to_json(cs.R)},
                {"s", matrix_to_json(cs.S)},
                {"lag", cs.m.m},
                {"phi_R", iso_to_json(cs.phi_R)},
                {"phi_S", iso_to_json(cs.phi_S)},
                {"psi_A", iso_to_json(cs.psi_A)},
                {"psi_B", iso_to_json(cs.psi_B)}};
}

ConcreteShift parse_shift(const json& j, const std::string& where) {
    expect_keys(j, {"a", "b", "lag", "phi_R", "phi_S", "psi_A", "psi_B", "r", "s"}, where);
    const json& lag = j["lag"];
    if (!lag.is_number_integer() && !lag.is_number_unsigned())
        throw ParseError(where + ".lag: expected an integer");
    const std::int64_t m = lag.get<std::int64_t>();
    if (m < 1) throw ParseError(where + ".lag: must be at least one");
    ConcreteShift cs{parse_nat_matrix(j["a"], where + ".a"),
                     parse_nat_matrix(j["b"], where + ".b"),
                     parse_nat_matrix(j["r"], where + ".r"),
                     parse_nat_matrix(j["s"], where + ".s"),
                     Lag(static_cast<int>(m)),
                     parse_iso(j["phi_R"], where + ".phi_R"),
                     parse_iso(j["phi_S"], where + ".phi_S"),
                     parse_iso(j["psi_A"], where + ".psi_A"),
                     parse_iso(j["psi_B"], where + ".psi_B")};
    ValidationReport report = validate_concrete_shift(cs);
    if (!report.ok) throw InvariantViolation(where + ": " + report.message);
    return cs;
}

json dims_to_json(const std::vector<Card>& dims) {
    json out = json::array();
    for (const Card& d : dims) out.push_back(card_to_json(d));
    return out;
}

std::vector<Card> parse_dims(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array of dimensions");
    std::vector<Card> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_card(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

json descriptor_to_json(const CorrDescriptor& d) {
    return json{{"left_dims", dims_to_json(d.left_dims)},
                {"right_dims", dims_to_json(d.right_dims)},
                {"mult", matrix_to_json(d.mult)}};
}

CorrDescriptor parse_descriptor(const json& j, const std::string& where) {
    expect_keys(j, {"left_dims", "mult", "right_dims"}, where);
    CorrDescriptor d{parse_dims(j["left_dims"], where + ".left_dims"),
                     parse_dims(j["right_dims"], where + ".right_dims"),
                     parse_card_matrix(j["mult"], where + ".mult")};
    require_descriptor(d);
    return d;
}

}  // namespace

ArtifactFile matrix_artifact(const CardMatrix& a) {
    ArtifactFile art;
    art.kind = "matrix";
    art.matrix = a;
    return art;
}

ArtifactFile matrix_artifact(const NatMatrix& a) { return matrix_artifact(to_card(a)); }

ArtifactFile chain_artifact(const CardChain& c) {
    ArtifactFile art;
    art.kind = "chain";
    art.chain = c;
    return art;
}

ArtifactFile chain_artifact(const SSEChain& c) { return chain_artifact(to_card_chain(c)); }

ArtifactFile shift_artifact(const ConcreteShift& cs) {
    ArtifactFile art;
    art.kind = "concrete-shift";
    art.shift = cs;
    return art;
}

ArtifactFile descriptor_artifact(const CorrDescriptor& d) {
    ArtifactFile art;
    art.kind = "descriptor";
    art.descriptor = d;
    return art;
}

std::string serialize_artifact(const ArtifactFile& art) {
    json payload;
    if (art.kind == "matrix" && art.matrix)
        payload = matrix_to_json(*art.matrix);
    else if (art.kind == "chain" && art.chain)
        payload = chain_to_json(*art.chain);
    else if (art.kind == "concrete-shift" && art.shift)
        payload = shift_to_json(*art.shift);
    else if (art.kind == "descriptor" && art.descriptor)
        payload = descriptor_to_json(*art.descriptor);
    else
        throw InvariantViolation("artifact kind \"" + art.kind +
                                 "\" does not match its payload");
    json j{{"format_version", art.format_version}, {"kind", art.kind}, {"payload", payload}};
    return j.dump(2) + "\n";
}

ArtifactFile parse_artifact(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    expect_keys(j, {"format_version", "kind", "payload"}, "artifact");
    const json& version = j["format_version"];
    if (!version.is_number_integer() && !version.is_number_unsigned())
        throw ParseError("artifact.format_version: expected an integer");
    if (version.get<std::int64_t>() != 1)
        throw ParseError("artifact.format_version: unsupported version " + version.dump());
    const std::string kind = parse_string(j["kind"], "artifact.kind");
    ArtifactFile art;
    art.kind = kind;
    if (kind == "matrix")
        art.matrix = parse_card_matrix(j["payload"], "payload");
    else if (kind == "chain")
        art.chain = parse_chain(j["payload"], "payload");
    else if (kind == "concrete-shift")
        art.shift = parse_shift(j["payload"], "payload");
    else if (kind == "descriptor")
        art.descriptor = parse_descriptor(j["payload"], "payload");
    else
        throw ParseError("artifact.kind: unknown kind \"" + kind + "\"");
    return art;
}

ArtifactFile load_artifact(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_artifact(buf.str());
}

void save_artifact(const ArtifactFile& art, const std::string& path) {
    const std::string text = serialize_artifact(art);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvariantViolation("cannot write file: " + path);
    out << text;
    if (!out) throw InvariantViolation("cannot write file: " + path);
}

}  // namespace shifteq
