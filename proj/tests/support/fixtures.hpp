#pragma once

// Hand-entered regression matrices and printed reference values. The
// Laplacians are typed in directly rather than built from graphs so they can
// check the graph builder.

#include "ceep/linalg.hpp"

namespace fixtures {

using ceep::Complex;
using ceep::ComplexMatrix;
using ceep::ComplexVector;

inline ComplexMatrix l1() {
    return ComplexMatrix{{{3.0, 1.5}, {-2.0, -0.8}, {-1.0, -0.7}},
                         {{-2.0, -0.8}, {5.0, 1.8}, {-3.0, -1.0}},
                         {{-1.0, -0.7}, {-3.0, -1.0}, {4.0, 1.7}}};
}

inline ComplexMatrix l2() {
    return ComplexMatrix{{{1.0, 0.5}, {0.0, 0.0}, {-1.0, -0.5}},
                         {{-1.0, -0.5}, {1.0, 0.5}, {0.0, 0.0}},
                         {{0.0, 0.0}, {-1.0, -0.5}, {1.0, 0.5}}};
}

inline ComplexMatrix l3() {
    return ComplexMatrix{{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}},
                         {{-1.0, -0.5}, {2.0, 1.0}, {-1.0, -0.5}},
                         {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}};
}

inline const ComplexVector kX0{{6.0, 2.0}, {2.0, -1.0}, {4.0, 0.7}};

// Printed to three significant figures.
inline const ComplexVector kPrintedSpectrumL1{{0.0, 0.0}, {4.26, 2.24}, {7.7, 2.7}};
inline const ComplexVector kPrintedSpectrumL2{{0.0, 0.0}, {1.06, 1.61}, {1.93, -0.11}};

inline ComplexMatrix printed_exp_l1() {
    return ComplexMatrix{{{0.33, 0.01}, {0.33, 0.002}, {0.34, 0.005}},
                         {{0.33, 0.002}, {0.33, -0.006}, {0.33, 0.001}},
                         {{0.34, 0.005}, {0.33, -0.001}, {0.33, -0.003}}};
}

inline ComplexMatrix printed_exp_l2() {
    return ComplexMatrix{{{0.38, 0.11}, {0.21, 0.1}, {0.42, 0.01}},
                         {{0.42, 0.01}, {0.38, -0.11}, {0.21, 0.1}},
                         {{0.21, 0.1}, {0.42, 0.01}, {0.38, -0.11}}};
}

}  // namespace fixtures
