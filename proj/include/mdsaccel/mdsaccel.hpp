#pragma once

#include "mdsaccel/analytics.hpp"
#include "mdsaccel/errors.hpp"
#include "mdsaccel/gf256.hpp"
#include "mdsaccel/latency_model.hpp"
#include "mdsaccel/mds_codec.hpp"
#include "mdsaccel/model_spec.hpp"
#include "mdsaccel/monte_carlo.hpp"
#include "mdsaccel/quadrature.hpp"
#include "mdsaccel/report.hpp"
#include "mdsaccel/rng.hpp"
#include "mdsaccel/shard_format.hpp"
#include "mdsaccel/strategy.hpp"
#include "mdsaccel/net/fetch_client.hpp"
#include "mdsaccel/net/node_server.hpp"
