#pragma once

#include "forcelab/expr.hpp"
#include "forcelab/trajectory.hpp"
#include "forcelab/quadrature.hpp"
#include "forcelab/linalg.hpp"
#include "forcelab/solver.hpp"
#include "forcelab/forcing.hpp"
#include "forcelab/weights.hpp"
#include "forcelab/classify.hpp"
#include "forcelab/report_json.hpp"
#include "forcelab/runner.hpp"
#include "forcelab/builtin_corpus.hpp"
