#include "dolbres/sharp.hpp"
