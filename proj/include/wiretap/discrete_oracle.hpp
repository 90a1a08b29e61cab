#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wiretap/chain_step.hpp"
#include "wiretap/channel_model.hpp"

// Exact information measures on small discrete joint laws, used to check proof steps
// and to cross-check Gaussian closed forms on a discretized channel.
namespace wiretap::oracle {

inline constexpr double kEqualityTol = 1e-10;
inline constexpr double kInequalityTol = 1e-10;
inline constexpr std::size_t kMaxAlphabet = 6;

enum class Model {
    DegradedRx,               // Y = X + W, Z = Y + V (mod k), T = f(W)
    ReverselyDegradedRx,      // Z = X + V, Y = Z + dW, W = V + dW, T = f(W)
    DegradedTx,               // as DegradedRx, encoder X ~ p(x | m, t)
    ReverselyDegradedTx,      // as ReverselyDegradedRx, encoder X ~ p(x | m, t)
    DegradedMessageAware,     // T = f(W, M)
    ReverselyDegradedMessageAware,
    DegradedMemoryless,       // n = 2, arbitrary joint input, no help
    DiscretizedGaussian,      // built by discretize_gaussian_case
};
std::string_view to_string(Model m);
Model parse_model(std::string_view text);
std::span<const Model> converse_models();

struct Axis {
    std::string name;
    std::size_t size = 0;
};

// Conditional independence A - B - C, i.e. I(A; C | B) = 0. B may be empty.
struct MarkovChain {
    std::vector<std::string> a, b, c;
    std::string describe() const;
};

// Joint law stored by its support: one row of axis symbols per nonzero atom.
class JointTable {
public:
    JointTable(Model model, std::vector<Axis> axes);

    Model model() const { return model_; }
    const std::vector<Axis>& axes() const { return axes_; }
    const std::vector<MarkovChain>& declared_chains() const { return chains_; }
    std::size_t atoms() const { return probs_.size(); }
    std::size_t axis_index(std::string_view name) const;  // throws when missing
    bool has_axis(std::string_view name) const;

    void add(std::span<const std::uint16_t> symbols, double p);  // merges nothing; p > 0
    void declare(MarkovChain chain);
    void normalize();

    double total_probability() const;
    // Dense tensor in row-major axis order (only sensible for small tables).
    std::vector<double> dense() const;

    double entropy(std::span<const std::string> names) const;
    double mutual_information(std::span<const std::string> a, std::span<const std::string> b,
                              std::span<const std::string> given = {}) const;
    // Marginal law of the named axes as a dense row-major array.
    std::vector<double> marginal(std::span<const std::string> names) const;
    double chain_residual(const MarkovChain& chain) const;

private:
    std::vector<std::size_t> indices_of(std::span<const std::string> names) const;

    Model model_;
    std::vector<Axis> axes_;
    std::vector<std::uint16_t> symbols_;  // atoms() x axes_.size()
    std::vector<double> probs_;
    std::vector<MarkovChain> chains_;
};

// Convenience wrappers with brace-list arguments.
double H(const JointTable& t, std::initializer_list<std::string> names);
double I(const JointTable& t, std::initializer_list<std::string> a, std::initializer_list<std::string> b,
         std::initializer_list<std::string> given = {});

struct AlphabetSizes {
    std::size_t message = 3;  // |M|
    std::size_t symbol = 3;   // k: |X| = |W| = |V| = |Y| = |Z|
    std::size_t help = 2;     // |T|
};

// A random law factorized according to the model's generative structure, with every
// declared chain verified (residual < 1e-10) before it is returned.
JointTable random_consistent_table(Model model, const AlphabetSizes& sizes, std::uint64_t seed);
JointTable random_consistent_table(Structure structure, const AlphabetSizes& sizes, std::uint64_t seed);
// Every distribution replaced by a point mass.
JointTable deterministic_table(Model model, const AlphabetSizes& sizes, std::uint64_t seed);

struct StepReport {
    Model chain = Model::DegradedRx;
    std::vector<ChainStep> steps;
    bool passed() const;
    std::size_t violations() const;
};

// Evaluates both sides of every step of the converse argument for the table's model.
// Throws InvalidParams when the table lacks the structure the chain needs.
StepReport check_converse_chain(const JointTable& table, Model chain);

struct DiscretizationGrid {
    std::size_t points = 64;  // input support points, and Y / Z bins inside the central range
    double input_power = 0.0; // 0: use the channel's power limit
    double x_span_sd = 4.0;
    double out_span_sd = 6.0;
};

// n = 1 degraded-structure table over (X, Y, Z) with Gaussian-shaped discrete input and
// binned outputs. No Markov chain is declared: binning Y breaks X - Y - Z.
JointTable discretize_gaussian_case(const ChannelParams& params, const DiscretizationGrid& grid, int n = 1);

struct DiscretizedSecrecy {
    double best = 0.0;  // max over the input-power family of I(X;Y) - I(X;Z)
    double best_power = 0.0;
    double closed_form = 0.0;
    double relative_error = 0.0;
    std::vector<std::pair<double, double>> family;  // (input power, I(X;Y) - I(X;Z))
};
// Input-power family {1/4, 1/2, 3/4, 1} * P.
DiscretizedSecrecy discretized_secrecy_capacity(const ChannelParams& params, std::size_t points);

}  // namespace wiretap::oracle
