"""Protocol files of the experiment drivers."""
