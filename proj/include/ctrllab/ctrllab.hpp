#pragma once

#include "ctrllab/errors.hpp"
#include "ctrllab/rng.hpp"
#include "ctrllab/matrix.hpp"
#include "ctrllab/ensembles.hpp"
#include "ctrllab/exact.hpp"
#include "ctrllab/spectral.hpp"
#include "ctrllab/minctrl.hpp"
#include "ctrllab/scenarios.hpp"
#include "ctrllab/experiment.hpp"
#include "ctrllab/report.hpp"
