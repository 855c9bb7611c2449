#pragma once

#include "qnrlab/error.hpp"
#include "qnrlab/harness.hpp"
#include "qnrlab/linalg.hpp"
#include "qnrlab/matrix_json.hpp"
#include "qnrlab/means.hpp"
#include "qnrlab/qnr.hpp"
#include "qnrlab/quadrature.hpp"
#include "qnrlab/random.hpp"
#include "qnrlab/sectorial.hpp"
#include "qnrlab/semi_hilbert.hpp"
