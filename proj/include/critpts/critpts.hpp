#pragma once

#include "critpts/cli.hpp"
#include "critpts/dataset.hpp"
#include "critpts/error.hpp"
#include "critpts/generate.hpp"
#include "critpts/hull2d.hpp"
#include "critpts/index_set.hpp"
#include "critpts/io.hpp"
#include "critpts/kernel.hpp"
#include "critpts/mlpipeline.hpp"
#include "critpts/protocol.hpp"
#include "critpts/random.hpp"
#include "critpts/rational.hpp"
#include "critpts/separability.hpp"
#include "critpts/simplex.hpp"
#include "critpts/svm.hpp"
