/**
 * @file model.hpp
 * @brief Wavelet network with one hidden layer of Gaussian wavelons and a linear output.
 *
 * For input x, hidden node j computes t_j = (sum_i w_ij x_i - b_j) / a_j and f(t_j); the
 * output is yhat = sum_j W_j f(t_j). The activation is either the Gaussian e^{-t^2} or its
 * Taylor polynomial 1 - t^2 + t^4 / 2, the only form evaluable under encryption.
 */
#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cryptwnn::wnn {

enum class Activation { exact, poly };

std::string_view to_string(Activation a) noexcept;
/// Accepts "exact" and "poly"; throws std::invalid_argument otherwise.
Activation activation_from_string(std::string_view s);

/// Smallest allowed |a_j|; dilation divides the activation argument.
inline constexpr double kMinDilation = 1e-3;

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct WnnShape {
    std::size_t nin = 1;
    std::size_t nhn = 1;
    static constexpr std::size_t nout = 1;

    /// Hidden layer as wide as the input layer.
    static WnnShape square(std::size_t nin) { return {nin, nin}; }
    void validate() const;
    std::size_t weight_count() const noexcept { return nin * nhn; }
    friend bool operator==(const WnnShape&, const WnnShape&) = default;
};

/**
 * @brief The four parameter groups. Input weights are row-major: w[i * nhn + j] links
 * input i to hidden node j.
 */
struct ParamGroups {
    std::vector<double> w;
    std::vector<double> W;
    std::vector<double> b;
    std::vector<double> a;

    static ParamGroups zeros(const WnnShape& shape);
    static constexpr std::array<const char*, 4> kNames{"w", "W", "b", "a"};
    std::array<std::vector<double>*, 4> groups() noexcept { return {&w, &W, &b, &a}; }
    std::array<const std::vector<double>*, 4> groups() const noexcept { return {&w, &W, &b, &a}; }
    /// All values in group order w, W, b, a.
    std::vector<double> flatten() const;
    friend bool operator==(const ParamGroups&, const ParamGroups&) = default;
};

struct WnnParams : ParamGroups {
    WnnShape shape;

    double& weight(std::size_t i, std::size_t j) { return w[i * shape.nhn + j]; }
    double weight(std::size_t i, std::size_t j) const { return w[i * shape.nhn + j]; }
    /// Throws ShapeError if group sizes disagree with the shape.
    void validate() const;
};

/// Previous update deltas, one per parameter; zero at initialisation.
struct MomentumState : ParamGroups {};

/// Partial derivatives, one per parameter.
struct Gradients : ParamGroups {};

/// Every parameter uniform on the open interval (0, 1); momentum zeroed.
std::pair<WnnParams, MomentumState> init_params(const WnnShape& shape, std::mt19937_64& rng);

struct ActivationValue {
    double value;
    double derivative;
};

ActivationValue activation(double t, Activation mode) noexcept;

struct ForwardResult {
    double yhat = 0.0;
    std::vector<double> t;
    std::vector<double> f;
    std::vector<double> fprime;
};

/// Throws ShapeError on dimension mismatch and std::domain_error if some |a_j| < kMinDilation.
ForwardResult forward(const WnnParams& p, std::span<const double> x, Activation mode);

/// Mean squared error; throws std::invalid_argument on empty or mismatched input.
double mse(std::span<const double> y, std::span<const double> yhat);

/**
 * @brief Gradient of the per-sample squared error (y - yhat)^2.
 *
 * With r = y - yhat:
 *   de/dW_j  = -2 r f(t_j)
 *   de/dw_ij = -2 r W_j f'(t_j) x_i / a_j
 *   de/db_j  =  2 r W_j f'(t_j) / a_j
 *   de/da_j  =  2 r W_j f'(t_j) t_j / a_j
 */
Gradients gradients(const WnnParams& p, std::span<const double> x, double y, Activation mode);

}  // namespace cryptwnn::wnn
