#include "cli.hpp"

#include "chopf/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

namespace chopf::cli {

namespace {

// Flag combinations CLI11 cannot express; reported as usage errors.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string format = "text";
    std::string out;
    std::string input;

    std::string alphabet;
    std::string left;
    std::string right;
    std::string word;
    std::string mode = "deconcat";
    std::string method = "closed";
    std::size_t max_degree = kDefaultMaxDegree;
    std::size_t power = 2;

    std::size_t cards = 0;
    unsigned arity = 2;
    bool spectrum = false;
    std::size_t squarings = 0;
    double tolerance = 0;
    std::size_t budget = kDefaultSquaringBudget;

    std::string corpus;
    std::size_t epochs = 200;
    double rate = 0.1;
    std::uint64_t seed = 0;
    int dim = 4;
    int heads = 1;
    std::size_t context = 16;
    bool freeze_heads = false;

    int head = 0;
    std::string circuit = "ov";
    double psd_tolerance = 1e-9;
};

bool json_output(const Options& o) { return o.format == "json"; }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string real(double x) {
    std::ostringstream s;
    s << std::setprecision(6) << x;
    return s.str();
}

Alphabet require_alphabet(const Options& o) {
    if (o.alphabet.empty()) {
        throw UsageError("--alphabet is required");
    }
    return Alphabet(o.alphabet);
}

HopfKind kind_of(const Options& o) { return o.mode == "deshuffle" ? HopfKind::ConcatDeshuffle : HopfKind::ShuffleDeconcat; }

std::string render(const Elem& x, const Options& o) { return json_output(o) ? dump(to_json(x)) : format(x) + "\n"; }

// ---- algebra ---------------------------------------------------------------

std::string cmd_shuffle(const Options& o, const CLI::App& app) {
    if (!o.input.empty()) {
        return render(elem_from_json(read_json_file(o.input)), o);
    }
    if (app.count("--left") == 0 || app.count("--right") == 0) {
        throw UsageError("shuffle needs --left and --right");
    }
    const Alphabet alphabet = require_alphabet(o);
    const HopfStructure h(HopfKind::ShuffleDeconcat, alphabet, o.max_degree);
    return render(shuffle(h, word_parse(o.left, alphabet), word_parse(o.right, alphabet)), o);
}

std::string cmd_coproduct(const Options& o, const CLI::App& app) {
    TensorElem t = [&] {
        if (!o.input.empty()) {
            return tensor_from_json(read_json_file(o.input));
        }
        if (app.count("--word") == 0) {
            throw UsageError("coproduct needs --word");
        }
        const Alphabet alphabet = require_alphabet(o);
        const HopfStructure h(kind_of(o), alphabet, o.max_degree);
        return h.coproduct(word_parse(o.word, alphabet));
    }();
    return json_output(o) ? dump(to_json(t)) : format(t) + "\n";
}

LinMap antipode_map(const HopfStructure& h, std::size_t degree, const std::string& method) {
    if (method == "solve") {
        return antipode_solve(h, degree);
    }
    if (method == "identity") {
        return identity_map(h, degree);
    }
    return closed_antipode_map(h, degree);
}

std::string cmd_antipode(const Options& o, const CLI::App& app) {
    if (!o.input.empty()) {
        return render(elem_from_json(read_json_file(o.input)), o);
    }
    if (app.count("--word") == 0) {
        throw UsageError("antipode needs --word");
    }
    const Alphabet alphabet = require_alphabet(o);
    const HopfStructure h(kind_of(o), alphabet, o.max_degree);
    const Word w = word_parse(o.word, alphabet);
    h.require_degree(w.degree());
    return render(antipode_map(h, w.degree(), o.method).image(w), o);
}

std::string cmd_coherence(const Options& o) {
    const CoherenceReport report = [&] {
        if (!o.input.empty()) {
            return report_from_json(read_json_file(o.input));
        }
        const HopfStructure h(kind_of(o), require_alphabet(o), o.max_degree);
        return coherence_check(h, antipode_map(h, o.max_degree, o.method), o.max_degree);
    }();
    return json_output(o) ? dump(to_json(report)) : summary(report) + "\n";
}

std::string cmd_power(const Options& o, const CLI::App& app) {
    if (!o.input.empty()) {
        return render(elem_from_json(read_json_file(o.input)), o);
    }
    if (app.count("--word") == 0) {
        throw UsageError("power needs --word");
    }
    const Alphabet alphabet = require_alphabet(o);
    const HopfStructure h(kind_of(o), alphabet, o.max_degree);
    return render(hopf_power(o.power, h, word_parse(o.word, alphabet)), o);
}

// ---- Markov chains -----------------------------------------------------------

std::string format_polynomial(const Polynomial& p) {
    std::string s;
    for (std::size_t k = p.size(); k-- > 0;) {
        const Rational& c = p[k];
        if (c == 0) {
            continue;
        }
        const Rational mag = abs(c);
        if (s.empty()) {
            s += c < 0 ? "-" : "";
        } else {
            s += c < 0 ? " - " : " + ";
        }
        const bool unit = mag == 1;
        if (!unit || k == 0) {
            s += to_string(mag);
        }
        if (k > 0) {
            s += unit ? "" : "*";
            s += k == 1 ? "x" : "x^" + std::to_string(k);
        }
    }
    return s.empty() ? "0" : s;
}

std::string render(const MarkovChain& c, const Options& o) {
    if (json_output(o)) {
        return dump(to_json(c));
    }
    std::string s = "states:";
    for (const auto& w : c.states()) {
        s += " " + spell(w, c.alphabet());
    }
    s += "\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
        s += spell(c.states()[i], c.alphabet()) + ":";
        for (std::size_t j = 0; j < c.size(); ++j) {
            s += " " + to_string(c.matrix()(i, j));
        }
        s += "\n";
    }
    return s;
}

std::string render(const Spectrum& sp, const Options& o) {
    if (json_output(o)) {
        return dump(to_json(sp));
    }
    std::string s = "eigenvalues:";
    bool first = true;
    for (const auto& [value, mult] : sp.eigenvalues) {
        s += (first ? " " : ", ") + to_string(value) + " x" + std::to_string(mult);
        first = false;
    }
    s += "\nstationary:";
    if (sp.stationary) {
        for (const auto& p : *sp.stationary) {
            s += " " + to_string(p);
        }
    } else {
        s += " not unique";
    }
    s += "\ncharacteristic polynomial: " + format_polynomial(sp.characteristic_polynomial) + "\n";
    if (!sp.complete()) {
        s += "unresolved factor: " + format_polynomial(sp.residual_factor) + "\n";
    }
    return s;
}

std::string render(const SquaringResult& r, const Options& o) {
    if (json_output(o)) {
        return dump(to_json(r));
    }
    std::string s = "stationary by squaring:";
    for (double p : r.distribution) {
        s += " " + real(p);
    }
    return s + " (" + std::to_string(r.squarings) + " squarings, spread " + real(r.spread) + ")\n";
}

std::string chain_report(const MarkovChain& chain, const Options& o, const CLI::App& app) {
    if (app.count("--tolerance") > 0) {
        if (!(o.tolerance > 0)) {
            throw UsageError("--tolerance must be positive");
        }
        return render(stationary_by_squaring(chain, o.tolerance, o.budget), o);
    }
    return render(spectrum_exact(chain), o);
}

std::string cmd_riffle(const Options& o, const CLI::App& app) {
    MarkovChain chain = [&] {
        if (!o.input.empty()) {
            return chain_from_json(read_json_file(o.input));
        }
        if (app.count("--cards") == 0) {
            throw UsageError("riffle needs --cards");
        }
        return riffle_chain(o.cards, o.arity);
    }();
    if (o.squarings > 0) {
        chain = repeated_square(chain, o.squarings);
    }
    if (o.spectrum || app.count("--tolerance") > 0) {
        return chain_report(chain, o, app);
    }
    return render(chain, o);
}

// Accepts a chain (analysed) or a previously emitted spectrum or squaring
// result (validated and re-emitted).
std::string cmd_spectrum(const Options& o, const CLI::App& app) {
    if (!o.input.empty()) {
        const Json j = read_json_file(o.input);
        if (j.is_object() && j.contains("eigenvalues")) {
            return render(spectrum_from_json(j), o);
        }
        if (j.is_object() && j.contains("distribution")) {
            return render(squaring_from_json(j), o);
        }
        return chain_report(chain_from_json(j), o, app);
    }
    if (app.count("--cards") == 0) {
        throw UsageError("spectrum needs --cards or --input");
    }
    return chain_report(riffle_chain(o.cards, o.arity), o, app);
}

// ---- toy transformer ---------------------------------------------------------

// Distinct characters of the text in sorted order, line breaks excluded.
std::string letters_of(const std::string& text) {
    std::set<char> seen;
    for (char ch : text) {
        if (ch != '\n' && ch != '\r') {
            seen.insert(ch);
        }
    }
    return std::string(seen.begin(), seen.end());
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open corpus '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

toy::Corpus corpus_for(const Options& o, std::string& alphabet) {
    if (o.corpus.empty()) {
        throw UsageError("--corpus is required");
    }
    const std::string text = read_text(o.corpus);
    if (alphabet.empty()) {
        alphabet = letters_of(text);
    }
    if (alphabet.empty()) {
        throw ParseError("corpus is empty");
    }
    return toy::corpus_from_text(text, Alphabet(alphabet), o.corpus);
}

std::string cmd_train(const Options& o, const CLI::App& app) {
    std::string alphabet = o.alphabet;
    toy::ToyModel model;
    if (!o.input.empty()) {
        const Json j = read_json_file(o.input);
        model = model_from_json(j);
        if (alphabet.empty() && j.contains("alphabet")) {
            alphabet = j.at("alphabet").get<std::string>();
        }
    }
    const toy::Corpus corpus = corpus_for(o, alphabet);
    const int vocab = static_cast<int>(alphabet.size());
    if (o.input.empty()) {
        model = toy::model_init(vocab, o.dim, o.heads, o.seed);
        if (o.freeze_heads) {
            model = toy::zero_heads(std::move(model));
        }
    } else if (model.vocab != vocab) {
        throw BadDimension("checkpoint vocabulary " + std::to_string(model.vocab) + " does not match alphabet '" +
                           alphabet + "'");
    }
    if (app.count("--rate") > 0 && !(o.rate > 0)) {
        throw UsageError("--rate must be positive");
    }

    toy::TrainConfig config;
    config.epochs = o.epochs;
    config.rate = o.rate;
    config.context = o.context;
    config.update.freeze_heads = o.freeze_heads;
    std::string log;
    toy::train(model, corpus, config, [&](std::size_t epoch, double defect, double ce) {
        if (json_output(o)) {
            log += epoch_record(epoch, defect, ce).dump() + "\n";
        } else {
            log += "epoch " + std::to_string(epoch) + " defect " + real(defect) + " cross-entropy " + real(ce) + "\n";
        }
    });
    if (!o.out.empty()) {
        std::ofstream f(o.out, std::ios::binary);
        if (!(f << dump(to_json(model, alphabet)))) {
            throw Error("cannot write '" + o.out + "'");
        }
    }
    return log;
}

std::string render_stochastic(const QMatrix& p, const std::string& labels, const Options& o) {
    if (json_output(o)) {
        return dump(to_json(p));
    }
    auto label = [&](std::size_t i) {
        return labels.size() == p.rows() ? std::string(1, labels[i]) : std::to_string(i);
    };
    std::string s = "next:";
    for (std::size_t j = 0; j < p.cols(); ++j) {
        s += " " + label(j);
    }
    s += "\n";
    for (std::size_t i = 0; i < p.rows(); ++i) {
        s += label(i) + ":";
        for (std::size_t j = 0; j < p.cols(); ++j) {
            s += " " + to_string(p(i, j));
        }
        s += "\n";
    }
    return s;
}

std::string cmd_bigram(const Options& o) {
    if (!o.input.empty()) {
        return render_stochastic(qmatrix_from_json(read_json_file(o.input)), o.alphabet, o);
    }
    std::string alphabet = o.alphabet;
    const toy::Corpus corpus = corpus_for(o, alphabet);
    return render_stochastic(toy::bigram_fit(corpus, static_cast<int>(alphabet.size())), alphabet, o);
}

std::string render(const toy::PsdReport& r, const Options& o) {
    if (json_output(o)) {
        return dump(to_json(r));
    }
    std::string s = "symmetry defect: " + real(r.symmetry_defect) + "\nsymmetric part eigenvalues:";
    for (double ev : r.symmetric_eigenvalues) {
        s += " " + real(ev);
    }
    s += "\neigenvalues:";
    for (const auto& z : r.eigenvalues) {
        s += " " + real(z.real());
        if (z.imag() != 0) {
            s += (z.imag() < 0 ? "-" : "+") + real(std::abs(z.imag())) + "i";
        }
    }
    return s + "\nverdict: " + (r.copying ? "copying" : "not copying") + "\n";
}

// Accepts a dense matrix, a checkpoint (one head's circuit), or a previously
// emitted report.
std::string cmd_psd(const Options& o) {
    if (o.input.empty()) {
        throw UsageError("psd needs --input");
    }
    const Json j = read_json_file(o.input);
    if (j.is_object() && j.contains("symmetryDefect")) {
        return render(psd_report_from_json(j), o);
    }
    toy::Matrix m;
    if (j.is_object()) {
        const toy::ToyModel model = model_from_json(j);
        if (o.head < 0 || o.head >= model.heads) {
            throw BadDimension("head " + std::to_string(o.head) + " outside 0.." + std::to_string(model.heads - 1));
        }
        const auto h = static_cast<std::size_t>(o.head);
        m = o.circuit == "qk" ? model.qk[h] : model.ov[h];
    } else {
        m = matrix_from_json(j);
    }
    return render(toy::psd_check(m, o.psd_tolerance), o);
}

// ---- wiring ------------------------------------------------------------------

void common_flags(CLI::App* sub, Options& o) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--out", o.out, "Write the result to this file instead of standard output");
    sub->add_option("--input", o.input, "Read a JSON artifact instead of building one from flags");
}

void algebra_flags(CLI::App* sub, Options& o, bool with_mode) {
    sub->add_option("--alphabet", o.alphabet, "Ordered letters, 1 to 10 distinct symbols");
    sub->add_option("--max-degree", o.max_degree, "Degree cap")->check(CLI::NonNegativeNumber);
    if (with_mode) {
        sub->add_option("--mode", o.mode, "Coproduct: deconcat (shuffle algebra) or deshuffle (concatenation algebra)")
            ->check(CLI::IsMember({"deconcat", "deshuffle"}));
    }
}

void chain_flags(CLI::App* sub, Options& o) {
    sub->add_option("--cards", o.cards, "Deck size, 2 to 6");
    sub->add_option("--arity", o.arity, "Shuffle arity a >= 2");
    sub->add_option("--tolerance", o.tolerance, "Find the stationary distribution by squaring to this spread");
    sub->add_option("--budget", o.budget, "Squaring budget for --tolerance");
}

void corpus_flags(CLI::App* sub, Options& o) {
    sub->add_option("--corpus", o.corpus, "Text file, one token per character");
    sub->add_option("--alphabet", o.alphabet, "Token letters; inferred from the corpus when omitted");
}

void write_result(const std::string& text, const Options& o, bool to_file, std::ostream& out) {
    if (to_file && !o.out.empty()) {
        std::ofstream f(o.out, std::ios::binary);
        if (!(f << text)) {
            throw Error("cannot write '" + o.out + "'");
        }
        return;
    }
    out << text;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Hopf algebra of words, riffle-shuffle chains, and a toy attention-only transformer"};
    app.require_subcommand(1);
    Options o;

    auto* shuffle_cmd = app.add_subcommand("shuffle", "Shuffle product of two words");
    algebra_flags(shuffle_cmd, o, false);
    shuffle_cmd->add_option("--left", o.left, "Left word");
    shuffle_cmd->add_option("--right", o.right, "Right word");

    auto* coproduct_cmd = app.add_subcommand("coproduct", "Coproduct of a word");
    algebra_flags(coproduct_cmd, o, true);
    coproduct_cmd->add_option("--word", o.word, "Word to split");

    auto* antipode_cmd = app.add_subcommand("antipode", "Antipode of a word");
    algebra_flags(antipode_cmd, o, true);
    antipode_cmd->add_option("--word", o.word, "Word");
    antipode_cmd->add_option("--method", o.method, "closed form or degree-recursive solve")
        ->check(CLI::IsMember({"closed", "solve"}));

    auto* coherence_cmd = app.add_subcommand("coherence", "Check m(id (x) S) Delta = u eps on every basis word");
    algebra_flags(coherence_cmd, o, true);
    coherence_cmd->add_option("--method", o.method, "Antipode candidate: closed, solve, or identity")
        ->check(CLI::IsMember({"closed", "solve", "identity"}));

    auto* power_cmd = app.add_subcommand("power", "Hopf power Psi^a of a word");
    algebra_flags(power_cmd, o, true);
    power_cmd->add_option("--word", o.word, "Word");
    power_cmd->add_option("--power", o.power, "Exponent a >= 1");

    auto* riffle_cmd = app.add_subcommand("riffle", "GSR a-shuffle transition matrix");
    chain_flags(riffle_cmd, o);
    riffle_cmd->add_flag("--spectrum", o.spectrum, "Print the exact spectrum instead of the matrix");
    riffle_cmd->add_option("--squarings", o.squarings, "Replace P by P^(2^k)");

    auto* spectrum_cmd = app.add_subcommand("spectrum", "Exact spectrum of a riffle chain or a chain from --input");
    chain_flags(spectrum_cmd, o);

    auto* train_cmd = app.add_subcommand("train", "Train the toy transformer on a corpus");
    corpus_flags(train_cmd, o);
    train_cmd->add_option("--epochs", o.epochs, "Full-batch epochs");
    train_cmd->add_option("--rate", o.rate, "Learning rate");
    train_cmd->add_option("--seed", o.seed, "Initialization seed");
    train_cmd->add_option("--dim", o.dim, "Residual width")->check(CLI::PositiveNumber);
    train_cmd->add_option("--heads", o.heads, "Attention heads")->check(CLI::PositiveNumber);
    train_cmd->add_option("--context", o.context, "Context window length")->check(CLI::PositiveNumber);
    train_cmd->add_flag("--freeze-heads", o.freeze_heads, "Train only the direct path; fresh heads start at zero");

    auto* bigram_cmd = app.add_subcommand("bigram", "Maximum-likelihood bigram transitions of a corpus");
    corpus_flags(bigram_cmd, o);

    auto* psd_cmd = app.add_subcommand("psd", "Symmetry and eigenvalue diagnostics of a matrix or head circuit");
    psd_cmd->add_option("--head", o.head, "Head index when --input is a checkpoint");
    psd_cmd->add_option("--circuit", o.circuit, "Circuit when --input is a checkpoint")
        ->check(CLI::IsMember({"ov", "qk"}));
    psd_cmd->add_option("--tolerance", o.psd_tolerance, "Eigenvalues above this count as positive");

    for (auto* sub : app.get_subcommands({})) {
        common_flags(sub, o);
    }

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        std::string text;
        bool to_file = true;
        if (shuffle_cmd->parsed()) {
            text = cmd_shuffle(o, *shuffle_cmd);
        } else if (coproduct_cmd->parsed()) {
            text = cmd_coproduct(o, *coproduct_cmd);
        } else if (antipode_cmd->parsed()) {
            text = cmd_antipode(o, *antipode_cmd);
        } else if (coherence_cmd->parsed()) {
            text = cmd_coherence(o);
        } else if (power_cmd->parsed()) {
            text = cmd_power(o, *power_cmd);
        } else if (riffle_cmd->parsed()) {
            text = cmd_riffle(o, *riffle_cmd);
        } else if (spectrum_cmd->parsed()) {
            text = cmd_spectrum(o, *spectrum_cmd);
        } else if (train_cmd->parsed()) {
            text = cmd_train(o, *train_cmd);
            to_file = false; // --out holds the checkpoint
        } else if (bigram_cmd->parsed()) {
            text = cmd_bigram(o);
        } else if (psd_cmd->parsed()) {
            text = cmd_psd(o);
        }
        write_result(text, o, to_file, out);
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed input: " << e.what() << "\n";
        return kExitDomain;
    }
}

} // namespace chopf::cli
