"""Test suite for RoleModel."""
