#pragma once

#define LRR_VERSION "0.1.0"
