#include "gibbslab/model/parametrization.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "gibbslab/errors.hpp"

namespace gibbslab {

Parametrization Parametrization::centered() { return {Kind::Centered, 1.0, {}}; }

Parametrization Parametrization::noncentered() { return {Kind::Noncentered, 0.0, {}}; }

Parametrization Parametrization::partial(double weight) {
    if (!(weight >= 0.0 && weight <= 1.0)) throw InvalidParameter("partial weight must lie in [0,1]");
    return {Kind::Partial, weight, {}};
}

Parametrization Parametrization::data_based(std::string tag) {
    if (tag.empty()) throw InvalidParameter("data-based parametrization needs a tag");
    return {Kind::DataBased, 0.0, std::move(tag)};
}

std::string Parametrization::label() const {
    switch (kind) {
        case Kind::Centered:
            return "centered";
        case Kind::Noncentered:
            return "noncentered";
        case Kind::Partial: {
            std::ostringstream os;
            os.precision(17);
            os << "partial:" << weight;
            return os.str();
        }
        case Kind::DataBased:
            return "data:" + tag;
    }
    return "unknown";
}

Parametrization Parametrization::parse(const std::string& text) {
    if (text == "centered" || text == "cp") return centered();
    if (text == "noncentered" || text == "ncp") return noncentered();
    if (text.rfind("partial:", 0) == 0) {
        const std::string num = text.substr(8);
        double w = 0.0;
        const auto res = std::from_chars(num.data(), num.data() + num.size(), w);
        if (res.ec != std::errc() || res.ptr != num.data() + num.size()) {
            throw ConfigError("bad partial weight in parametrization '" + text + "'");
        }
        return partial(w);
    }
    if (text.rfind("data:", 0) == 0 && text.size() > 5) return data_based(text.substr(5));
    throw ConfigError("unknown parametrization '" + text + "'");
}

bool operator==(const Parametrization& a, const Parametrization& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Parametrization::Kind::Partial) return a.weight == b.weight;
    if (a.kind == Parametrization::Kind::DataBased) return a.tag == b.tag;
    return true;
}

}  // namespace gibbslab
