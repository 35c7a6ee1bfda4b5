#pragma once

#include "chopf/markov.hpp"
#include "chopf/word.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace chopf::toy {

using Matrix = Eigen::MatrixXd;
using Token = int;

// Attention-only transformer with one layer of heads.
//
// Shapes: embed is vocab x dModel with one residual vector per row; unembed
// is dModel x vocab, so a residual row r yields logits r * unembed. The
// per-head circuits act on residual column vectors: a query x_i scores key
// x_j as x_i^T W_QK x_j, and an attended mixture c maps to W_OV c.
struct ToyModel {
    int vocab = 0;
    int dModel = 0;
    int heads = 0;
    std::uint64_t seed = 0;
    Matrix embed;
    Matrix unembed;
    std::vector<Matrix> qk;
    std::vector<Matrix> ov;

    friend bool operator==(const ToyModel& a, const ToyModel& b) {
        return a.vocab == b.vocab && a.dModel == b.dModel && a.heads == b.heads && a.seed == b.seed &&
               a.embed == b.embed && a.unembed == b.unembed && a.qk == b.qk && a.ov == b.ov;
    }
};

// Deterministic uniform initialization in [-1, 1] / sqrt(dModel).
ToyModel model_init(int vocab, int dModel, int heads, std::uint64_t seed);

// Heads set to zero: the zero-layer (direct path only) model.
ToyModel zero_heads(ToyModel model);

// Residual rebasing x -> Qx for an orthogonal Q.
ToyModel rebase(const ToyModel& model, const Matrix& q);

// One causal, row-stochastic L x L matrix per head.
std::vector<Matrix> qk_attention(const ToyModel& model, std::span<const Token> tokens);

// Direct path: logits_i = W_U W_E onehot(t_i). Rows are positions.
Matrix path_unit(const ToyModel& model, std::span<const Token> tokens);

// Attention path: logits_i = sum_h W_U W_OV^h sum_j A^h_ij W_E onehot(t_j).
Matrix path_conv(const ToyModel& model, std::span<const Token> tokens);
// Same, with caller-supplied attention patterns in place of the QK circuit.
Matrix path_conv(const ToyModel& model, std::span<const Token> tokens, std::span<const Matrix> attention);

// softmax(path_unit + path_conv), one distribution per row.
Matrix predict(const ToyModel& model, std::span<const Token> tokens);

// Mean over positions of || softmax(path_unit + path_conv)_i - onehot(target_i) ||^2.
double coherence_defect(const ToyModel& model, std::span<const Token> tokens, std::span<const Token> targets);

// Context window with its next-token targets.
struct Window {
    std::vector<Token> tokens;
    std::vector<Token> targets;
};

struct Corpus {
    std::vector<Token> tokens;
    std::string source;
};

// One symbol per character; line breaks are ignored, anything else outside
// the alphabet is an UnknownSymbol.
Corpus corpus_from_text(std::string_view text, const Alphabet& alphabet, std::string source = {});
Corpus load_corpus(const std::string& path, const Alphabet& alphabet);

// Consecutive non-overlapping windows covering every (token, next token) pair.
std::vector<Window> windows(const Corpus& corpus, std::size_t context);

struct UpdateOptions {
    bool freeze_heads = false;
    // Positions whose own defect is below this are treated as already copied
    // correctly and contribute no error.
    double copy_threshold = 1e-9;
};

// Gradient blocks, shaped like the model.
struct Gradient {
    Matrix embed;
    Matrix unembed;
    std::vector<Matrix> qk;
    std::vector<Matrix> ov;
};

// Exact derivative of the batch-mean defect with respect to each parameter
// block of the single layer. Errors go back one step along the direct path to
// the embedding and unembedding, and one step along each head's attention
// path to its W_OV and W_QK; nothing is chained through further layers.
Gradient local_gradient(const ToyModel& model, std::span<const Window> batch, const UpdateOptions& options = {});

// Mean defect over every position of the batch.
double batch_defect(const ToyModel& model, std::span<const Window> batch);
double batch_cross_entropy(const ToyModel& model, std::span<const Window> batch);

// model - rate * local_gradient; frozen heads are left untouched.
ToyModel update_step(const ToyModel& model, std::span<const Window> batch, double rate,
                     const UpdateOptions& options = {});

struct TrainConfig {
    std::size_t epochs = 200;
    double rate = 0.1;
    std::size_t context = 16;
    UpdateOptions update;
};

// Entry 0 is the untrained model; entry k follows epoch k.
struct DefectTrace {
    std::vector<double> defect;
    std::vector<double> cross_entropy;
};

// Full-batch training: one update_step over the whole corpus per epoch.
DefectTrace train(ToyModel& model, const Corpus& corpus, const TrainConfig& config,
                  const std::function<void(std::size_t epoch, double defect, double cross_entropy)>& on_epoch = {});

// Maximum-likelihood bigram transitions; rows without observations are uniform.
QMatrix bigram_fit(const Corpus& corpus, int vocab);

// softmax(W_U W_E) rows: the direct path's next-token distribution per token.
Matrix unit_path_distribution(const ToyModel& model);

struct PsdReport {
    double symmetry_defect = 0;                      // Frobenius norm of M - M^T
    std::vector<double> symmetric_eigenvalues;       // of (M + M^T) / 2, ascending
    std::vector<std::complex<double>> eigenvalues;   // of M itself
    bool copying = false;                            // every symmetric eigenvalue > tolerance
};

PsdReport psd_check(const Matrix& m, double tolerance);

} // namespace chopf::toy
