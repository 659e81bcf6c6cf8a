#pragma once

#include "mpnet/maxplus.hpp"
#include "mpnet/network.hpp"
#include "mpnet/system.hpp"
#include "mpnet/dynamics.hpp"
#include "mpnet/oracle.hpp"
#include "mpnet/io.hpp"
