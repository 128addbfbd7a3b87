"""Load metrics and paired policy comparisons."""
