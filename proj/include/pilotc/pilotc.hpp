#pragma once

#include "pilotc/bitstream.hpp"
#include "pilotc/block_coder.hpp"
#include "pilotc/codec.hpp"
#include "pilotc/container.hpp"
#include "pilotc/csv.hpp"
#include "pilotc/dct.hpp"
#include "pilotc/errors.hpp"
#include "pilotc/metrics.hpp"
#include "pilotc/params.hpp"
#include "pilotc/pipeline.hpp"
#include "pilotc/reconstruct.hpp"
#include "pilotc/synthetic.hpp"
#include "pilotc/trajectory.hpp"
