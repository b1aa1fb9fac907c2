#include "mtrans/correspond.hpp"
