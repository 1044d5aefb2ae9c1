#pragma once

#include "icviart/artmap.hpp"
#include "icviart/bench.hpp"
#include "icviart/data.hpp"
#include "icviart/icvi.hpp"
#include "icviart/kmeans.hpp"
#include "icviart/metrics.hpp"
#include "icviart/partition.hpp"
#include "icviart/preprocess.hpp"
#include "icviart/rng.hpp"
#include "icviart/serialization.hpp"
#include "icviart/trainer.hpp"
