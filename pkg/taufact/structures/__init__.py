"""Rings, associate relations, τ-relations and zero-divisor graphs."""
