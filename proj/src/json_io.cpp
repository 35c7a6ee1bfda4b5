#include "chopf/json_io.hpp"

#include <fstream>

namespace chopf {

namespace {

template <class T>
T field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(std::string("field '") + key + "' has the wrong type");
    }
}

const Json& array_field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
        throw ParseError(std::string("missing array field '") + key + "'");
    }
    return j.at(key);
}

Json flat(const toy::Matrix& m) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out.push_back(m(i, j));
        }
    }
    return out;
}

toy::Matrix unflat(const Json& j, int rows, int cols, const char* what) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw ParseError(std::string("matrix '") + what + "' has the wrong size");
    }
    toy::Matrix m(rows, cols);
    std::size_t k = 0;
    for (int i = 0; i < rows; ++i) {
        for (int c = 0; c < cols; ++c) {
            if (!j[k].is_number()) {
                throw ParseError(std::string("matrix '") + what + "' has a non-numeric entry");
            }
            m(i, c) = j[k++].get<double>();
        }
    }
    return m;
}

Json polynomial_json(const Polynomial& p) {
    Json out = Json::array();
    for (const auto& c : p) {
        out.push_back(to_string(c));
    }
    return out;
}

Polynomial polynomial_from(const Json& j) {
    if (!j.is_array()) {
        throw ParseError("polynomial must be an array");
    }
    Polynomial p;
    for (const auto& c : j) {
        p.push_back(parse_rational(c.get<std::string>()));
    }
    return p;
}

} // namespace

Json to_json(const Elem& a) {
    Json terms = Json::array();
    for (const auto& [w, c] : a.terms()) {
        terms.push_back({{"word", spell(w, a.alphabet())}, {"coeff", to_string(c)}});
    }
    return {{"alphabet", a.alphabet().letters()}, {"terms", terms}};
}

Elem elem_from_json(const Json& j) {
    const Alphabet alphabet(field<std::string>(j, "alphabet"));
    Elem out(alphabet);
    for (const auto& t : array_field(j, "terms")) {
        out.add(word_parse(field<std::string>(t, "word"), alphabet), parse_rational(field<std::string>(t, "coeff")));
    }
    return out;
}

Json to_json(const TensorElem& t) {
    Json terms = Json::array();
    for (const auto& [key, c] : t.terms()) {
        terms.push_back({{"left", spell(key.first, t.alphabet())},
                         {"right", spell(key.second, t.alphabet())},
                         {"coeff", to_string(c)}});
    }
    return {{"alphabet", t.alphabet().letters()}, {"terms", terms}};
}

TensorElem tensor_from_json(const Json& j) {
    const Alphabet alphabet(field<std::string>(j, "alphabet"));
    TensorElem out(alphabet);
    for (const auto& t : array_field(j, "terms")) {
        out.add({word_parse(field<std::string>(t, "left"), alphabet),
                  word_parse(field<std::string>(t, "right"), alphabet)},
                 parse_rational(field<std::string>(t, "coeff")));
    }
    return out;
}

Json to_json(const CoherenceReport& r) {
    Json defects = Json::array();
    for (const auto& [w, residual] : r.defects) {
        defects.push_back({{"word", spell(w, r.alphabet)}, {"residual", to_json(residual)}});
    }
    return {{"pass", r.pass},
            {"alphabet", r.alphabet.letters()},
            {"wordsChecked", r.words_checked},
            {"maxDefect", to_string(r.max_defect)},
            {"defects", defects}};
}

CoherenceReport report_from_json(const Json& j) {
    CoherenceReport r(Alphabet(field<std::string>(j, "alphabet")));
    r.words_checked = field<std::size_t>(j, "wordsChecked");
    r.max_defect = parse_rational(field<std::string>(j, "maxDefect"));
    for (const auto& d : array_field(j, "defects")) {
        const Word w = word_parse(field<std::string>(d, "word"), r.alphabet);
        Elem residual = elem_from_json(d.at("residual"));
        if (!r.lowest_defect_degree) {
            r.lowest_defect_degree = w.degree();
        }
        r.max_defect_degree = std::max(r.max_defect_degree.value_or(0), w.degree());
        r.defects.emplace(w, std::move(residual));
    }
    r.pass = r.defects.empty();
    if (r.pass != field<bool>(j, "pass")) {
        throw ParseError("report 'pass' flag disagrees with its defect list");
    }
    return r;
}

Json to_json(const QMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back(to_string(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

QMatrix qmatrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) {
        throw ParseError("matrix must be a nonempty array of rows");
    }
    const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
    QMatrix m(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw ParseError("matrix rows must be arrays of equal length");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[i][c].is_string()) {
                throw ParseError("exact matrix entries must be rational strings");
            }
            m(i, c) = parse_rational(j[i][c].get<std::string>());
        }
    }
    return m;
}

Json to_json(const MarkovChain& c) {
    Json states = Json::array();
    for (const auto& w : c.states()) {
        states.push_back(spell(w, c.alphabet()));
    }
    Json out = {{"alphabet", c.alphabet().letters()}, {"states", states}, {"P", to_json(c.matrix())}};
    if (c.arity()) {
        out["arity"] = *c.arity();
    }
    return out;
}

MarkovChain chain_from_json(const Json& j) {
    std::string letters;
    if (j.is_object() && j.contains("alphabet")) {
        letters = field<std::string>(j, "alphabet");
    } else {
        // union of the state symbols in first-seen order
        for (const auto& s : array_field(j, "states")) {
            for (char ch : s.get<std::string>()) {
                if (letters.find(ch) == std::string::npos) {
                    letters.push_back(ch);
                }
            }
        }
    }
    const Alphabet alphabet(letters);
    std::vector<Word> states;
    for (const auto& s : array_field(j, "states")) {
        if (!s.is_string()) {
            throw ParseError("states must be strings");
        }
        states.push_back(word_parse(s.get<std::string>(), alphabet));
    }
    std::optional<unsigned> arity;
    if (j.contains("arity")) {
        arity = field<unsigned>(j, "arity");
    }
    return MarkovChain(alphabet, std::move(states), qmatrix_from_json(array_field(j, "P")), arity);
}

Json to_json(const Spectrum& s) {
    Json eig = Json::array();
    for (const auto& [value, mult] : s.eigenvalues) {
        eig.push_back({{"value", to_string(value)}, {"multiplicity", mult}});
    }
    Json stationary = nullptr;
    if (s.stationary) {
        stationary = Json::array();
        for (const auto& p : *s.stationary) {
            stationary.push_back(to_string(p));
        }
    }
    return {{"eigenvalues", eig},
            {"stationary", stationary},
            {"characteristicPolynomial", polynomial_json(s.characteristic_polynomial)},
            {"residualFactor", polynomial_json(s.residual_factor)}};
}

Spectrum spectrum_from_json(const Json& j) {
    Spectrum s;
    for (const auto& e : array_field(j, "eigenvalues")) {
        s.eigenvalues.emplace(parse_rational(field<std::string>(e, "value")), field<std::size_t>(e, "multiplicity"));
    }
    if (j.contains("stationary") && !j.at("stationary").is_null()) {
        std::vector<Rational> pi;
        for (const auto& p : array_field(j, "stationary")) {
            pi.push_back(parse_rational(p.get<std::string>()));
        }
        s.stationary = std::move(pi);
    }
    s.characteristic_polynomial = polynomial_from(array_field(j, "characteristicPolynomial"));
    s.residual_factor = polynomial_from(array_field(j, "residualFactor"));
    return s;
}

Json to_json(const toy::Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(i, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

toy::Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) {
        throw ParseError("matrix must be a nonempty array of rows");
    }
    const std::size_t cols = j.front().size();
    toy::Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw ParseError("matrix rows must be arrays of equal length");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            const Json& v = j[i][c];
            // exact rational strings are accepted too, so bigram output feeds psd
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                v.is_string() ? to_double(parse_rational(v.get<std::string>())) : v.get<double>();
        }
    }
    return m;
}

Json to_json(const toy::ToyModel& m, const std::string& alphabet) {
    Json qk = Json::array();
    Json ov = Json::array();
    for (int h = 0; h < m.heads; ++h) {
        qk.push_back(flat(m.qk[static_cast<std::size_t>(h)]));
        ov.push_back(flat(m.ov[static_cast<std::size_t>(h)]));
    }
    Json out = {{"vocab", m.vocab}, {"dModel", m.dModel}, {"heads", m.heads}, {"seed", m.seed}};
    if (!alphabet.empty()) {
        out["alphabet"] = alphabet;
    }
    out["embed"] = flat(m.embed);
    out["unembed"] = flat(m.unembed);
    out["qk"] = qk;
    out["ov"] = ov;
    return out;
}

toy::ToyModel model_from_json(const Json& j) {
    toy::ToyModel m;
    m.vocab = field<int>(j, "vocab");
    m.dModel = field<int>(j, "dModel");
    m.heads = field<int>(j, "heads");
    m.seed = field<std::uint64_t>(j, "seed");
    if (m.vocab < 1 || m.dModel < 1 || m.heads < 1) {
        throw BadDimension("checkpoint dimensions must be >= 1");
    }
    m.embed = unflat(array_field(j, "embed"), m.vocab, m.dModel, "embed");
    m.unembed = unflat(array_field(j, "unembed"), m.dModel, m.vocab, "unembed");
    const Json& qk = array_field(j, "qk");
    const Json& ov = array_field(j, "ov");
    if (qk.size() != static_cast<std::size_t>(m.heads) || ov.size() != static_cast<std::size_t>(m.heads)) {
        throw ParseError("checkpoint needs one qk and one ov matrix per head");
    }
    for (int h = 0; h < m.heads; ++h) {
        m.qk.push_back(unflat(qk[static_cast<std::size_t>(h)], m.dModel, m.dModel, "qk"));
        m.ov.push_back(unflat(ov[static_cast<std::size_t>(h)], m.dModel, m.dModel, "ov"));
    }
    return m;
}

Json to_json(const toy::PsdReport& r) {
    Json eig = Json::array();
    for (const auto& z : r.eigenvalues) {
        eig.push_back({{"re", z.real()}, {"im", z.imag()}});
    }
    return {{"symmetryDefect", r.symmetry_defect},
            {"symmetricEigenvalues", r.symmetric_eigenvalues},
            {"eigenvalues", eig},
            {"copying", r.copying}};
}

toy::PsdReport psd_report_from_json(const Json& j) {
    toy::PsdReport r;
    r.symmetry_defect = field<double>(j, "symmetryDefect");
    r.symmetric_eigenvalues = field<std::vector<double>>(j, "symmetricEigenvalues");
    for (const auto& z : array_field(j, "eigenvalues")) {
        r.eigenvalues.emplace_back(field<double>(z, "re"), field<double>(z, "im"));
    }
    r.copying = field<bool>(j, "copying");
    return r;
}

Json to_json(const SquaringResult& r) {
    return {{"distribution", r.distribution}, {"squarings", r.squarings}, {"spread", r.spread}};
}

SquaringResult squaring_from_json(const Json& j) {
    SquaringResult r;
    r.distribution = field<std::vector<double>>(j, "distribution");
    r.squarings = field<std::size_t>(j, "squarings");
    r.spread = field<double>(j, "spread");
    return r;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path + "' is not valid JSON: " + e.what());
    }
}

Json epoch_record(std::size_t epoch, double defect, double cross_entropy) {
    return {{"epoch", epoch}, {"defect", defect}, {"crossEntropy", cross_entropy}};
}

} // namespace chopf
