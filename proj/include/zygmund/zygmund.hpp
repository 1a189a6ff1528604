#pragma once

#include "zygmund/class_error.hpp"
#include "zygmund/classifiers.hpp"
#include "zygmund/errors.hpp"
#include "zygmund/experiment.hpp"
#include "zygmund/kernel_series.hpp"
#include "zygmund/order_bounds.hpp"
#include "zygmund/psi_family.hpp"
#include "zygmund/summation_filter.hpp"
#include "zygmund/tail_sums.hpp"
#include "zygmund/trig_polynomial.hpp"
