"""
Storage module for model files
Handles JSON model files and trajectory CSV output
"""
