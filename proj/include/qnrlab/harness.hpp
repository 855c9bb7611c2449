#pragma once

#include "qnrlab/harness/core.hpp"
#include "qnrlab/harness/predicates.hpp"
#include "qnrlab/harness/run.hpp"
