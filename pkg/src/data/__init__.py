# Data module