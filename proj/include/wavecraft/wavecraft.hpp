#pragma once

#include "case_studies.hpp"
#include "closed_form.hpp"
#include "errors.hpp"
#include "exp_function.hpp"
#include "expansion.hpp"
#include "expr.hpp"
#include "latex.hpp"
#include "parser.hpp"
#include "pipeline.hpp"
#include "poly.hpp"
#include "polysolve.hpp"
#include "problem.hpp"
#include "radical.hpp"
#include "report.hpp"
#include "tw_reduce.hpp"
#include "verify.hpp"
