"""Aisles on bounded derived categories of Dynkin quivers and the criterion deciding when a heart is derived equivalent."""
