#pragma once

#include <string>
#include <vector>

namespace crocco {

/// Which sub-step produced a time slice.
enum class Provenance { Initial, Porous, Transport };

inline std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Initial: return "initial";
        case Provenance::Porous: return "porous";
        case Provenance::Transport: return "transport";
    }
    return "?";
}

/// One time slice of the Crocco unknown W on the tensor grid.
struct Slice {
    double t = 0.0;
    Provenance prov = Provenance::Initial;
    std::vector<double> w;  ///< node values, zeta-contiguous per column
};

}  // namespace crocco
