#include "chopf/transformer.hpp"

#include "chopf/errors.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace chopf::toy {

namespace {

void softmax_rows(Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double top = m.row(i).maxCoeff();
        m.row(i) = (m.row(i).array() - top).exp();
        m.row(i) /= m.row(i).sum();
    }
}

void check_tokens(const ToyModel& model, std::span<const Token> tokens) {
    if (tokens.empty()) {
        throw EmptyContext();
    }
    for (Token t : tokens) {
        if (t < 0 || t >= model.vocab) {
            throw BadDimension("token " + std::to_string(t) + " outside vocabulary of " +
                               std::to_string(model.vocab));
        }
    }
}

Matrix gather(const ToyModel& model, std::span<const Token> tokens) {
    Matrix x(static_cast<Eigen::Index>(tokens.size()), model.dModel);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        x.row(static_cast<Eigen::Index>(i)) = model.embed.row(tokens[i]);
    }
    return x;
}

Matrix causal_attention(const Matrix& x, const Matrix& qk) {
    Matrix scores = x * qk * x.transpose();
    const Eigen::Index n = scores.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double top = scores.row(i).head(i + 1).maxCoeff();
        double sum = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j > i) {
                scores(i, j) = 0;
            } else {
                scores(i, j) = std::exp(scores(i, j) - top);
                sum += scores(i, j);
            }
        }
        scores.row(i).head(i + 1) /= sum;
    }
    return scores;
}

bool is_zero(const Matrix& m) { return (m.array() == 0.0).all(); }

struct Forward {
    Matrix x;                   // L x d residual inputs
    std::vector<Matrix> attn;   // per head, empty when the head was skipped
    std::vector<Matrix> mixed;  // per head, A x
    Matrix residual;            // x + sum_h (A x) W_OV^T
    Matrix probs;               // softmax(residual * unembed)
};

// Heads with an all-zero W_OV add exactly nothing to the residual; they are
// skipped unless the caller needs their attention state.
Forward forward(const ToyModel& model, std::span<const Token> tokens, bool keep_inert_heads) {
    Forward f;
    f.x = gather(model, tokens);
    f.residual = f.x;
    f.attn.resize(static_cast<std::size_t>(model.heads));
    f.mixed.resize(static_cast<std::size_t>(model.heads));
    for (std::size_t h = 0; h < f.attn.size(); ++h) {
        if (!keep_inert_heads && is_zero(model.ov[h])) {
            continue;
        }
        f.attn[h] = causal_attention(f.x, model.qk[h]);
        f.mixed[h] = f.attn[h] * f.x;
        f.residual += f.mixed[h] * model.ov[h].transpose();
    }
    f.probs = f.residual * model.unembed;
    softmax_rows(f.probs);
    return f;
}

double row_defect(const Matrix& probs, Eigen::Index i, Token target) {
    double s = 0;
    for (Eigen::Index v = 0; v < probs.cols(); ++v) {
        const double d = probs(i, v) - (v == target ? 1.0 : 0.0);
        s += d * d;
    }
    return s;
}

void check_window(const ToyModel& model, const Window& w) {
    if (w.tokens.size() != w.targets.size()) {
        throw LengthMismatch(w.tokens.size(), w.targets.size());
    }
    check_tokens(model, w.tokens);
    check_tokens(model, w.targets);
}

std::size_t total_positions(std::span<const Window> batch) {
    std::size_t n = 0;
    for (const auto& w : batch) {
        n += w.tokens.size();
    }
    return n;
}

} // namespace

ToyModel model_init(int vocab, int dModel, int heads, std::uint64_t seed) {
    if (vocab < 1 || dModel < 1 || heads < 1) {
        throw BadDimension("vocab, dModel and heads must all be >= 1");
    }
    std::mt19937_64 rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dModel));
    auto draw = [&](Eigen::Index r, Eigen::Index c) {
        Matrix m(r, c);
        for (Eigen::Index i = 0; i < r; ++i) {
            for (Eigen::Index j = 0; j < c; ++j) {
                // 53 random bits mapped onto [-1, 1)
                const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                m(i, j) = (2.0 * u - 1.0) * scale;
            }
        }
        return m;
    };
    ToyModel m;
    m.vocab = vocab;
    m.dModel = dModel;
    m.heads = heads;
    m.seed = seed;
    m.embed = draw(vocab, dModel);
    m.unembed = draw(dModel, vocab);
    for (int h = 0; h < heads; ++h) {
        m.qk.push_back(draw(dModel, dModel));
        m.ov.push_back(draw(dModel, dModel));
    }
    return m;
}

ToyModel zero_heads(ToyModel model) {
    for (auto& m : model.qk) {
        m.setZero();
    }
    for (auto& m : model.ov) {
        m.setZero();
    }
    return model;
}

ToyModel rebase(const ToyModel& model, const Matrix& q) {
    if (q.rows() != model.dModel || q.cols() != model.dModel) {
        throw BadDimension("rebasing matrix must be dModel x dModel");
    }
    if (!(q.transpose() * q).isIdentity(1e-9)) {
        throw BadDimension("rebasing matrix is not orthogonal");
    }
    ToyModel out = model;
    out.embed = model.embed * q.transpose();
    out.unembed = q * model.unembed;
    for (std::size_t h = 0; h < out.qk.size(); ++h) {
        out.qk[h] = q * model.qk[h] * q.transpose();
        out.ov[h] = q * model.ov[h] * q.transpose();
    }
    return out;
}

std::vector<Matrix> qk_attention(const ToyModel& model, std::span<const Token> tokens) {
    check_tokens(model, tokens);
    const Matrix x = gather(model, tokens);
    std::vector<Matrix> out;
    for (const auto& qk : model.qk) {
        out.push_back(causal_attention(x, qk));
    }
    return out;
}

Matrix path_unit(const ToyModel& model, std::span<const Token> tokens) {
    check_tokens(model, tokens);
    return gather(model, tokens) * model.unembed;
}

Matrix path_conv(const ToyModel& model, std::span<const Token> tokens, std::span<const Matrix> attention) {
    check_tokens(model, tokens);
    if (attention.size() != model.ov.size()) {
        throw BadDimension("need one attention pattern per head");
    }
    const Matrix x = gather(model, tokens);
    Matrix out = Matrix::Zero(x.rows(), model.vocab);
    for (std::size_t h = 0; h < attention.size(); ++h) {
        if (attention[h].rows() != x.rows() || attention[h].cols() != x.rows()) {
            throw BadDimension("attention pattern must be L x L");
        }
        out += attention[h] * x * model.ov[h].transpose() * model.unembed;
    }
    return out;
}

Matrix path_conv(const ToyModel& model, std::span<const Token> tokens) {
    const auto attention = qk_attention(model, tokens);
    return path_conv(model, tokens, attention);
}

Matrix predict(const ToyModel& model, std::span<const Token> tokens) {
    check_tokens(model, tokens);
    return forward(model, tokens, false).probs;
}

double coherence_defect(const ToyModel& model, std::span<const Token> tokens, std::span<const Token> targets) {
    if (tokens.size() != targets.size()) {
        throw LengthMismatch(tokens.size(), targets.size());
    }
    check_tokens(model, tokens);
    check_tokens(model, targets);
    const Matrix probs = predict(model, tokens);
    double total = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        total += row_defect(probs, static_cast<Eigen::Index>(i), targets[i]);
    }
    return total / static_cast<double>(tokens.size());
}

Corpus corpus_from_text(std::string_view text, const Alphabet& alphabet, std::string source) {
    Corpus c;
    c.source = std::move(source);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n' || text[i] == '\r') {
            continue;
        }
        const auto idx = alphabet.index_of(text[i]);
        if (!idx) {
            throw UnknownSymbol(i, text[i]);
        }
        c.tokens.push_back(*idx);
    }
    if (c.tokens.empty()) {
        throw ParseError("corpus is empty");
    }
    return c;
}

Corpus load_corpus(const std::string& path, const Alphabet& alphabet) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open corpus '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return corpus_from_text(buf.str(), alphabet, path);
}

std::vector<Window> windows(const Corpus& corpus, std::size_t context) {
    if (context == 0) {
        throw BadDimension("context length must be >= 1");
    }
    if (corpus.tokens.size() < 2) {
        throw CorpusTooShort();
    }
    std::vector<Window> out;
    const std::size_t pairs = corpus.tokens.size() - 1;
    for (std::size_t start = 0; start < pairs; start += context) {
        const std::size_t end = std::min(pairs, start + context);
        Window w;
        w.tokens.assign(corpus.tokens.begin() + static_cast<std::ptrdiff_t>(start),
                        corpus.tokens.begin() + static_cast<std::ptrdiff_t>(end));
        w.targets.assign(corpus.tokens.begin() + static_cast<std::ptrdiff_t>(start + 1),
                         corpus.tokens.begin() + static_cast<std::ptrdiff_t>(end + 1));
        out.push_back(std::move(w));
    }
    return out;
}

Gradient local_gradient(const ToyModel& model, std::span<const Window> batch, const UpdateOptions& options) {
    Gradient g;
    g.embed = Matrix::Zero(model.embed.rows(), model.embed.cols());
    g.unembed = Matrix::Zero(model.unembed.rows(), model.unembed.cols());
    for (int h = 0; h < model.heads; ++h) {
        g.qk.push_back(Matrix::Zero(model.dModel, model.dModel));
        g.ov.push_back(Matrix::Zero(model.dModel, model.dModel));
    }
    const std::size_t n = total_positions(batch);
    if (n == 0) {
        return g;
    }
    const double scale = 2.0 / static_cast<double>(n);

    for (const auto& w : batch) {
        check_window(model, w);
        const Forward f = forward(model, w.tokens, !options.freeze_heads);
        const Eigen::Index len = f.x.rows();

        // d defect / d logits, through the softmax Jacobian
        Matrix dz = Matrix::Zero(len, model.vocab);
        for (Eigen::Index i = 0; i < len; ++i) {
            if (row_defect(f.probs, i, w.targets[static_cast<std::size_t>(i)]) < options.copy_threshold) {
                continue;
            }
            Eigen::RowVectorXd err = f.probs.row(i);
            err(w.targets[static_cast<std::size_t>(i)]) -= 1.0;
            err *= scale;
            const double mean = f.probs.row(i).dot(err);
            dz.row(i) = f.probs.row(i).array() * (err.array() - mean);
        }

        g.unembed += f.residual.transpose() * dz;
        const Matrix dres = dz * model.unembed.transpose();
        Matrix dx = dres; // direct path

        for (std::size_t h = 0; h < f.attn.size(); ++h) {
            if (f.attn[h].size() == 0) {
                continue;
            }
            const Matrix& a = f.attn[h];
            g.ov[h] += dres.transpose() * f.mixed[h];
            const Matrix dmix = dres * model.ov[h];
            dx += a.transpose() * dmix;
            Matrix da = dmix * f.x.transpose();
            Matrix ds = Matrix::Zero(len, len);
            for (Eigen::Index i = 0; i < len; ++i) {
                const double centre = a.row(i).head(i + 1).dot(da.row(i).head(i + 1));
                ds.row(i).head(i + 1) = a.row(i).head(i + 1).array() * (da.row(i).head(i + 1).array() - centre);
            }
            g.qk[h] += f.x.transpose() * ds * f.x;
            dx += ds * f.x * model.qk[h].transpose() + ds.transpose() * f.x * model.qk[h];
        }

        for (Eigen::Index j = 0; j < len; ++j) {
            g.embed.row(w.tokens[static_cast<std::size_t>(j)]) += dx.row(j);
        }
    }
    return g;
}

double batch_defect(const ToyModel& model, std::span<const Window> batch) {
    double total = 0;
    std::size_t n = 0;
    for (const auto& w : batch) {
        check_window(model, w);
        const Matrix probs = forward(model, w.tokens, false).probs;
        for (std::size_t i = 0; i < w.tokens.size(); ++i) {
            total += row_defect(probs, static_cast<Eigen::Index>(i), w.targets[i]);
        }
        n += w.tokens.size();
    }
    return n == 0 ? 0.0 : total / static_cast<double>(n);
}

double batch_cross_entropy(const ToyModel& model, std::span<const Window> batch) {
    double total = 0;
    std::size_t n = 0;
    for (const auto& w : batch) {
        check_window(model, w);
        const Matrix probs = forward(model, w.tokens, false).probs;
        for (std::size_t i = 0; i < w.tokens.size(); ++i) {
            total -= std::log(probs(static_cast<Eigen::Index>(i), w.targets[i]));
        }
        n += w.tokens.size();
    }
    return n == 0 ? 0.0 : total / static_cast<double>(n);
}

ToyModel update_step(const ToyModel& model, std::span<const Window> batch, double rate, const UpdateOptions& options) {
    if (!(rate >= 0)) {
        throw Error("learning rate must be nonnegative");
    }
    const Gradient g = local_gradient(model, batch, options);
    ToyModel out = model;
    out.embed -= rate * g.embed;
    out.unembed -= rate * g.unembed;
    if (!options.freeze_heads) {
        for (std::size_t h = 0; h < out.qk.size(); ++h) {
            out.qk[h] -= rate * g.qk[h];
            out.ov[h] -= rate * g.ov[h];
        }
    }
    return out;
}

DefectTrace train(ToyModel& model, const Corpus& corpus, const TrainConfig& config,
                  const std::function<void(std::size_t, double, double)>& on_epoch) {
    for (Token t : corpus.tokens) {
        if (t < 0 || t >= model.vocab) {
            throw BadDimension("corpus token outside the model vocabulary");
        }
    }
    const auto batch = windows(corpus, config.context);
    DefectTrace trace;
    auto record = [&](std::size_t epoch) {
        trace.defect.push_back(batch_defect(model, batch));
        trace.cross_entropy.push_back(batch_cross_entropy(model, batch));
        if (on_epoch) {
            on_epoch(epoch, trace.defect.back(), trace.cross_entropy.back());
        }
    };
    record(0);
    for (std::size_t e = 1; e <= config.epochs; ++e) {
        model = update_step(model, batch, config.rate, config.update);
        record(e);
    }
    return trace;
}

QMatrix bigram_fit(const Corpus& corpus, int vocab) {
    if (corpus.tokens.size() < 2) {
        throw CorpusTooShort();
    }
    if (vocab < 1) {
        throw BadDimension("vocabulary must be nonempty");
    }
    const auto v = static_cast<std::size_t>(vocab);
    std::vector<std::vector<long>> counts(v, std::vector<long>(v, 0));
    for (std::size_t i = 0; i + 1 < corpus.tokens.size(); ++i) {
        const Token a = corpus.tokens[i];
        const Token b = corpus.tokens[i + 1];
        if (a < 0 || b < 0 || a >= vocab || b >= vocab) {
            throw BadDimension("corpus token outside the vocabulary");
        }
        ++counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    QMatrix p(v, v);
    for (std::size_t i = 0; i < v; ++i) {
        long total = 0;
        for (long c : counts[i]) {
            total += c;
        }
        for (std::size_t j = 0; j < v; ++j) {
            p(i, j) = total == 0 ? Rational(1, static_cast<unsigned long>(v)) : Rational(counts[i][j], total);
            p(i, j).canonicalize();
        }
    }
    return p;
}

Matrix unit_path_distribution(const ToyModel& model) {
    Matrix m = model.embed * model.unembed;
    softmax_rows(m);
    return m;
}

PsdReport psd_check(const Matrix& m, double tolerance) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw BadDimension("psd_check needs a nonempty square matrix");
    }
    PsdReport r;
    r.symmetry_defect = (m - m.transpose()).norm();
    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> se(sym, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < se.eigenvalues().size(); ++i) {
        r.symmetric_eigenvalues.push_back(se.eigenvalues()(i));
    }
    Eigen::EigenSolver<Matrix> ge(m, false);
    for (Eigen::Index i = 0; i < ge.eigenvalues().size(); ++i) {
        r.eigenvalues.push_back(ge.eigenvalues()(i));
    }
    r.copying = true;
    for (double ev : r.symmetric_eigenvalues) {
        r.copying = r.copying && ev > tolerance;
    }
    return r;
}

} // namespace chopf::toy
