#pragma once

#include "bepw/greenfn/duhamel.hpp"
#include "bepw/greenfn/kernel.hpp"
#include "bepw/greenfn/sigma.hpp"
#include "bepw/greenfn/symbol.hpp"
