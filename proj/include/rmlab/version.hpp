#pragma once

#define RMLAB_VERSION "0.1.0"
