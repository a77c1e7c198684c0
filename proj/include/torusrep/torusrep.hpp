#pragma once

#include "torusrep/rational.hpp"
#include "torusrep/exact_linalg.hpp"
#include "torusrep/multi_index.hpp"
#include "torusrep/weyl.hpp"
#include "torusrep/slrep.hpp"
#include "torusrep/torusfields.hpp"
#include "torusrep/tensorrep.hpp"
#include "torusrep/probe.hpp"
#include "torusrep/report.hpp"
#include "torusrep/suites.hpp"
