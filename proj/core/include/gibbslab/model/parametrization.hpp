#pragma once

#include <string>

namespace gibbslab {

// Which auxiliary coordinates the Gibbs sampler works in.
//
// Partial(w) uses X = X* + (1 - w) Theta, so w = 1 is the centered chain and
// w = 0 the location-noncentered chain. DataBased carries a model-specific tag
// such as "vm" (the linear map built from the conditional mean and variance of
// X given Theta and Y), "bridge" or "hybrid".
struct Parametrization {
    enum class Kind { Centered, Noncentered, Partial, DataBased };

    Kind kind = Kind::Centered;
    double weight = 1.0;
    std::string tag;

    static Parametrization centered();
    static Parametrization noncentered();
    static Parametrization partial(double weight);
    static Parametrization data_based(std::string tag);

    bool is_centered() const { return kind == Kind::Centered; }
    std::string label() const;
    // Inverse of label(): "centered", "noncentered", "partial:<w>", "data:<tag>".
    static Parametrization parse(const std::string& text);

    friend bool operator==(const Parametrization& a, const Parametrization& b);
};

}  // namespace gibbslab
