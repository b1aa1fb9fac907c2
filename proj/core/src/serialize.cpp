#include "mtrans/serialize.hpp"
