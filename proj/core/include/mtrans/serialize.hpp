#pragma once

#include "mtrans/funcrep.hpp"
